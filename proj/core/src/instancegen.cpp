#include "rtd/instancegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtd/detail/parallel.hpp"
#include "rtd/error.hpp"
#include "rtd/random.hpp"

namespace rtd {

Formula generate_random_3sat(std::uint32_t num_vars, std::uint32_t num_clauses, std::uint64_t seed) {
  require(num_vars >= 3, "random 3-SAT needs at least 3 variables");
  require(num_clauses >= 1, "random 3-SAT needs at least one clause");
  Rng rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(num_clauses);
  for (std::uint32_t c = 0; c < num_clauses; ++c) {
    Var picked[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      Var v = 0;
      do {
        v = static_cast<Var>(rng.below(num_vars)) + 1;
      } while (std::find(picked, picked + k, v) != picked + k);
      picked[k] = v;
    }
    Clause clause;
    for (Var v : picked) clause.push_back(rng.coin() ? Lit::negative(v) : Lit::positive(v));
    clauses.push_back(std::move(clause));
  }
  return Formula(num_vars, std::move(clauses));
}

namespace {

struct BudgetExceeded {};

class Dpll {
 public:
  Dpll(const Formula& formula, std::uint64_t seed, std::uint64_t node_limit)
      : num_vars_(formula.num_vars()), rng_(seed), node_limit_(node_limit) {
    clause_offset_.push_back(0);
    Clause normalized;
    for (const Clause& clause : formula.clauses()) {
      normalized.clear();
      bool tautology = false;
      for (Lit lit : clause) {
        if (std::find(normalized.begin(), normalized.end(), lit) != normalized.end()) continue;
        if (std::find(normalized.begin(), normalized.end(), ~lit) != normalized.end()) tautology = true;
        normalized.push_back(lit);
      }
      if (tautology) continue;
      lits_.insert(lits_.end(), normalized.begin(), normalized.end());
      clause_offset_.push_back(static_cast<std::uint32_t>(lits_.size()));
    }
    num_clauses_ = clause_offset_.size() - 1;
    occ_.assign(2 * num_vars_, {});
    for (std::uint32_t c = 0; c < num_clauses_; ++c) {
      for (std::uint32_t i = clause_offset_[c]; i < clause_offset_[c + 1]; ++i) occ_[slot(lits_[i])].push_back(c);
    }
    value_.assign(num_vars_ + 1, 0);
    sat_count_.assign(num_clauses_, 0);
    false_count_.assign(num_clauses_, 0);
    polarity_count_.assign(2 * num_vars_, 0);
  }

  DpllResult solve() {
    DpllResult result;
    try {
      for (std::uint32_t c = 0; c < num_clauses_; ++c) {
        if (size(c) == 1) queue_.push_back(c);
      }
      const bool sat = search();
      result.status = sat ? DpllStatus::Sat : DpllStatus::Unsat;
      if (sat) {
        Assignment model(num_vars_);
        for (Var v = 1; v <= num_vars_; ++v) model.set(v, value_[v] > 0);
        result.model = std::move(model);
      }
    } catch (const BudgetExceeded&) {
      result.status = DpllStatus::BudgetExceeded;
    }
    result.nodes = nodes_;
    return result;
  }

 private:
  static std::size_t slot(Lit lit) { return 2 * (lit.var() - 1) + (lit.is_negative() ? 1 : 0); }
  std::uint32_t size(std::uint32_t c) const { return clause_offset_[c + 1] - clause_offset_[c]; }
  int value(Lit lit) const {
    const int v = value_[lit.var()];
    return lit.is_negative() ? -v : v;
  }

  // Returns false on conflict (assignment still recorded on the trail).
  bool assign(Lit lit) {
    value_[lit.var()] = lit.is_negative() ? -1 : 1;
    trail_.push_back(lit);
    for (std::uint32_t c : occ_[slot(lit)]) {
      if (sat_count_[c]++ == 0) ++satisfied_;
    }
    bool ok = true;
    for (std::uint32_t c : occ_[slot(~lit)]) {
      const std::uint32_t f = ++false_count_[c];
      if (sat_count_[c] > 0) continue;
      if (f == size(c)) ok = false;
      else if (f + 1 == size(c)) queue_.push_back(c);
    }
    return ok;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const Lit lit = trail_.back();
      trail_.pop_back();
      for (std::uint32_t c : occ_[slot(lit)]) {
        if (--sat_count_[c] == 0) --satisfied_;
      }
      for (std::uint32_t c : occ_[slot(~lit)]) --false_count_[c];
      value_[lit.var()] = 0;
    }
    queue_.clear();
  }

  bool propagate() {
    while (!queue_.empty()) {
      const std::uint32_t c = queue_.back();
      queue_.pop_back();
      if (sat_count_[c] > 0) continue;
      Lit unit;
      bool found = false;
      for (std::uint32_t i = clause_offset_[c]; i < clause_offset_[c + 1]; ++i) {
        if (value(lits_[i]) == 0) {
          unit = lits_[i];
          found = true;
          break;
        }
      }
      if (!found) {
        queue_.clear();
        return false;
      }
      if (!assign(unit)) {
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  // Assigns pure literals of the open clauses until none remain.
  void eliminate_pure() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::fill(polarity_count_.begin(), polarity_count_.end(), 0);
      for (std::uint32_t c = 0; c < num_clauses_; ++c) {
        if (sat_count_[c] > 0) continue;
        for (std::uint32_t i = clause_offset_[c]; i < clause_offset_[c + 1]; ++i) {
          if (value(lits_[i]) == 0) ++polarity_count_[slot(lits_[i])];
        }
      }
      for (Var v = 1; v <= num_vars_; ++v) {
        if (value_[v] != 0) continue;
        const std::uint32_t pos = polarity_count_[slot(Lit::positive(v))];
        const std::uint32_t neg = polarity_count_[slot(Lit::negative(v))];
        if ((pos > 0) != (neg > 0)) {
          assign(pos > 0 ? Lit::positive(v) : Lit::negative(v));
          changed = true;
        }
      }
    }
  }

  bool search() {
    if (node_limit_ != 0 && nodes_ >= node_limit_) throw BudgetExceeded{};
    ++nodes_;
    if (!propagate()) return false;
    eliminate_pure();
    if (satisfied_ == num_clauses_) return true;

    std::uint32_t shortest = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t c = 0; c < num_clauses_; ++c) {
      if (sat_count_[c] == 0) shortest = std::min(shortest, size(c) - false_count_[c]);
    }
    branch_vars_.clear();
    for (std::uint32_t c = 0; c < num_clauses_; ++c) {
      if (sat_count_[c] != 0 || size(c) - false_count_[c] != shortest) continue;
      for (std::uint32_t i = clause_offset_[c]; i < clause_offset_[c + 1]; ++i) {
        const Var v = lits_[i].var();
        if (value_[v] == 0 && std::find(branch_vars_.begin(), branch_vars_.end(), v) == branch_vars_.end()) {
          branch_vars_.push_back(v);
        }
      }
    }
    const Var v = branch_vars_[rng_.below(branch_vars_.size())];
    const Lit first = rng_.coin() ? Lit::positive(v) : Lit::negative(v);

    const std::size_t mark = trail_.size();
    if (assign(first) && search()) return true;
    undo_to(mark);
    if (assign(~first) && search()) return true;
    undo_to(mark);
    return false;
  }

  std::uint32_t num_vars_;
  Rng rng_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  std::vector<Lit> lits_;
  std::vector<std::uint32_t> clause_offset_;
  std::size_t num_clauses_ = 0;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<int> value_;
  std::vector<std::uint32_t> sat_count_;
  std::vector<std::uint32_t> false_count_;
  std::vector<std::uint32_t> polarity_count_;
  std::size_t satisfied_ = 0;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> queue_;
  std::vector<Var> branch_vars_;
};

}  // namespace

DpllResult dpll_sat(const Formula& formula, std::uint64_t seed, const DpllOptions& options) {
  return Dpll(formula, seed, options.node_limit).solve();
}

TestSet build_test_set(std::uint32_t num_vars, double clause_ratio, std::uint32_t count, std::uint64_t base_seed,
                       const TestSetOptions& options) {
  require(count >= 1, "test set count must be at least 1");
  require(clause_ratio > 0.0, "clause ratio must be positive");
  const auto num_clauses = static_cast<std::uint32_t>(std::lround(clause_ratio * num_vars));

  TestSet set;
  set.descriptor = {num_vars, num_clauses, count, base_seed};

  // Candidates are judged in batches; each candidate's verdict depends only
  // on its index, so the accepted sequence is the same for any batch size.
  const std::size_t batch = std::max<std::size_t>(8, count);
  std::uint64_t next_index = 0;
  while (set.instances.size() < count) {
    std::vector<std::optional<Formula>> formulas(batch);
    std::vector<DpllStatus> verdicts(batch, DpllStatus::Unsat);
    detail::parallel_for(
        batch,
        [&](std::size_t j) {
          const std::uint64_t seed = derive_seed(base_seed, next_index + j);
          formulas[j].emplace(generate_random_3sat(num_vars, num_clauses, seed));
          verdicts[j] = dpll_sat(*formulas[j], derive_seed(seed, 1), options.dpll).status;
        },
        options.threads);
    for (std::size_t j = 0; j < batch && set.instances.size() < count; ++j) {
      switch (verdicts[j]) {
        case DpllStatus::Sat:
          set.instances.push_back(std::move(*formulas[j]));
          set.candidate_indices.push_back(next_index + j);
          break;
        case DpllStatus::Unsat: ++set.discarded_unsat; break;
        case DpllStatus::BudgetExceeded: ++set.discarded_budget; break;
      }
    }
    next_index += batch;
  }
  return set;
}

}  // namespace rtd
