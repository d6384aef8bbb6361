#include "rtd/sls.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "rtd/error.hpp"
#include "rtd/random.hpp"
#include "rtd/search_state.hpp"

namespace rtd {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Gsat: return "gsat";
    case Algorithm::Gwsat: return "gwsat";
    case Algorithm::Wsat: return "wsat";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "gsat") return Algorithm::Gsat;
  if (name == "gwsat") return Algorithm::Gwsat;
  if (name == "wsat") return Algorithm::Wsat;
  throw ContractViolation("unknown algorithm '" + std::string(name) + "'");
}

namespace {

void check_probability(const std::optional<double>& p, const char* what) {
  if (p && !(*p >= 0.0 && *p <= 1.0)) {
    throw ContractViolation(std::string(what) + " must lie in [0, 1]");
  }
}

std::string short_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

void SolverConfig::validate() const {
  switch (algorithm) {
    case Algorithm::Gsat:
      require(!walk_probability && !noise, "gsat takes no walk probability or noise");
      break;
    case Algorithm::Gwsat:
      require(walk_probability.has_value(), "gwsat requires a walk probability");
      require(!noise, "gwsat takes no noise parameter");
      break;
    case Algorithm::Wsat:
      require(noise.has_value(), "wsat requires a noise parameter");
      require(!walk_probability, "wsat takes no walk probability");
      break;
  }
  check_probability(walk_probability, "walk probability");
  check_probability(noise, "noise");
}

std::string SolverConfig::tag() const {
  std::string out(to_string(algorithm));
  if (walk_probability) out += "-wp" + short_number(*walk_probability);
  if (noise) out += "-n" + short_number(*noise);
  return out;
}

CompletenessClass SolverConfig::completeness() const {
  switch (algorithm) {
    case Algorithm::Gsat: return CompletenessClass::EssentiallyIncomplete;
    case Algorithm::Gwsat:
      return walk_probability.value_or(0.0) > 0.0 ? CompletenessClass::ApproximatelyComplete
                                                  : CompletenessClass::EssentiallyIncomplete;
    case Algorithm::Wsat:
      return noise.value_or(0.0) > 0.0 ? CompletenessClass::ApproximatelyComplete
                                       : CompletenessClass::EssentiallyIncomplete;
  }
  return CompletenessClass::EssentiallyIncomplete;
}

namespace {

class Stepper {
 public:
  Stepper(SearchState& state, Rng& rng) : state_(state), rng_(rng) { candidates_.reserve(state.num_vars()); }

  Var gsat() {
    int best = 0;
    candidates_.clear();
    for (Var v = 1; v <= state_.num_vars(); ++v) {
      const int delta = state_.score_delta(v);
      if (candidates_.empty() || delta < best) {
        best = delta;
        candidates_.clear();
        candidates_.push_back(v);
      } else if (delta == best) {
        candidates_.push_back(v);
      }
    }
    return pick();
  }

  Var random_walk() {
    const auto clause = random_unsat_clause();
    return clause[rng_.below(clause.size())].var();
  }

  Var wsat(double noise) {
    const auto clause = random_unsat_clause();
    int best = 0;
    candidates_.clear();
    for (Lit lit : clause) {
      const int b = state_.break_count(lit.var());
      if (candidates_.empty() || b < best) {
        best = b;
        candidates_.clear();
        candidates_.push_back(lit.var());
      } else if (b == best) {
        candidates_.push_back(lit.var());
      }
    }
    if (best == 0) return pick();
    if (rng_.uniform() < noise) return clause[rng_.below(clause.size())].var();
    return pick();
  }

 private:
  std::span<const Lit> random_unsat_clause() {
    const auto unsat = state_.unsat_clauses();
    return state_.clause(unsat[rng_.below(unsat.size())]);
  }

  Var pick() {
    return candidates_.size() == 1 ? candidates_.front() : candidates_[rng_.below(candidates_.size())];
  }

  SearchState& state_;
  Rng& rng_;
  std::vector<Var> candidates_;
};

}  // namespace

RunRecord run(const Formula& formula, const SolverConfig& config, std::uint64_t cutoff, std::uint64_t seed,
              const StepObserver& observer) {
  config.validate();
  require(cutoff >= 1, "cutoff must be at least one flip");

  Rng rng(seed);
  SearchState state(formula, Assignment::random(formula.num_vars(), rng));
  if (state.num_unsat() == 0) return {Outcome::Success, 0, seed};

  Stepper stepper(state, rng);
  const double wp = config.walk_probability.value_or(0.0);
  const double noise = config.noise.value_or(0.0);

  for (std::uint64_t flips = 1; flips <= cutoff; ++flips) {
    Var v = 0;
    switch (config.algorithm) {
      case Algorithm::Gsat: v = stepper.gsat(); break;
      case Algorithm::Gwsat: v = rng.uniform() < wp ? stepper.random_walk() : stepper.gsat(); break;
      case Algorithm::Wsat: v = stepper.wsat(noise); break;
    }
    state.flip(v);
    if (observer) observer(v, state);
    if (state.num_unsat() == 0) return {Outcome::Success, flips, seed};
  }
  return {Outcome::Censored, cutoff, seed};
}

}  // namespace rtd
