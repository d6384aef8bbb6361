#include "rtd/search_state.hpp"

#include <algorithm>
#include <limits>

#include "rtd/error.hpp"

namespace rtd {

namespace {
constexpr std::uint32_t kNotUnsat = std::numeric_limits<std::uint32_t>::max();
}

SearchState::SearchState(const Formula& formula, Assignment initial)
    : num_vars_(formula.num_vars()), assignment_(std::move(initial)) {
  require(assignment_.size() == num_vars_, "assignment length does not match formula");

  clause_offset_.push_back(0);
  Clause normalized;
  for (const Clause& clause : formula.clauses()) {
    normalized.clear();
    bool tautology = false;
    for (Lit lit : clause) {
      if (std::find(normalized.begin(), normalized.end(), lit) != normalized.end()) continue;
      if (std::find(normalized.begin(), normalized.end(), ~lit) != normalized.end()) {
        tautology = true;
        break;
      }
      normalized.push_back(lit);
    }
    if (tautology) continue;
    lits_.insert(lits_.end(), normalized.begin(), normalized.end());
    clause_offset_.push_back(static_cast<std::uint32_t>(lits_.size()));
  }
  const auto num_clauses = static_cast<std::uint32_t>(clause_offset_.size() - 1);

  std::vector<std::uint32_t> counts(2 * num_vars_ + 1, 0);
  for (Lit lit : lits_) ++counts[literal_slot(lit) + 1];
  occ_offset_.assign(2 * num_vars_ + 1, 0);
  for (std::size_t i = 1; i < occ_offset_.size(); ++i) occ_offset_[i] = occ_offset_[i - 1] + counts[i];
  occ_.resize(lits_.size());
  std::vector<std::uint32_t> fill(occ_offset_.begin(), occ_offset_.end() - 1);
  for (std::uint32_t c = 0; c < num_clauses; ++c) {
    for (Lit lit : clause(c)) occ_[fill[literal_slot(lit)]++] = c;
  }

  true_count_.assign(num_clauses, 0);
  true_xor_.assign(num_clauses, 0);
  break_.assign(num_vars_ + 1, 0);
  make_.assign(num_vars_ + 1, 0);
  unsat_pos_.assign(num_clauses, kNotUnsat);
  for (std::uint32_t c = 0; c < num_clauses; ++c) {
    for (Lit lit : clause(c)) {
      if (assignment_.satisfies(lit)) {
        ++true_count_[c];
        true_xor_[c] ^= lit.var();
      }
    }
    if (true_count_[c] == 0) {
      mark_unsat(c);
      for (Lit lit : clause(c)) ++make_[lit.var()];
    } else if (true_count_[c] == 1) {
      ++break_[true_xor_[c]];
    }
  }
}

void SearchState::mark_unsat(std::uint32_t c) {
  unsat_pos_[c] = static_cast<std::uint32_t>(unsat_.size());
  unsat_.push_back(c);
}

void SearchState::mark_sat(std::uint32_t c) {
  const std::uint32_t pos = unsat_pos_[c];
  const std::uint32_t last = unsat_.back();
  unsat_[pos] = last;
  unsat_pos_[last] = pos;
  unsat_.pop_back();
  unsat_pos_[c] = kNotUnsat;
}

void SearchState::flip(Var v) {
  const bool new_value = !assignment_[v];
  assignment_.flip(v);
  const Lit now_true = new_value ? Lit::positive(v) : Lit::negative(v);

  for (std::uint32_t c : occurrences(now_true)) {
    const std::uint32_t before = true_count_[c]++;
    const Var previous_sole = true_xor_[c];
    true_xor_[c] ^= v;
    if (before == 0) {
      mark_sat(c);
      ++break_[v];
      for (Lit lit : clause(c)) --make_[lit.var()];
    } else if (before == 1) {
      --break_[previous_sole];
    }
  }
  for (std::uint32_t c : occurrences(~now_true)) {
    const std::uint32_t after = --true_count_[c];
    true_xor_[c] ^= v;
    if (after == 0) {
      mark_unsat(c);
      --break_[v];
      for (Lit lit : clause(c)) ++make_[lit.var()];
    } else if (after == 1) {
      ++break_[true_xor_[c]];
    }
  }
}

}  // namespace rtd
