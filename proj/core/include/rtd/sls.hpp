#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "rtd/cnf.hpp"

namespace rtd {

class SearchState;

enum class Algorithm { Gsat, Gwsat, Wsat };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);

/// Which SLS algorithm to run and its single tuning parameter. GWSAT takes a
/// walk probability, WSAT a noise level, GSAT nothing.
struct SolverConfig {
  Algorithm algorithm = Algorithm::Wsat;
  std::optional<double> walk_probability;
  std::optional<double> noise;

  static SolverConfig gsat() { return {Algorithm::Gsat, std::nullopt, std::nullopt}; }
  static SolverConfig gwsat(double wp) { return {Algorithm::Gwsat, wp, std::nullopt}; }
  static SolverConfig wsat(double noise) { return {Algorithm::Wsat, std::nullopt, noise}; }

  /// Throws ContractViolation if a parameter is missing, extra or outside [0, 1].
  void validate() const;

  /// Short filesystem-safe label, e.g. "wsat-n0.55".
  std::string tag() const;

  CompletenessClass completeness() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

enum class Outcome { Success, Censored };

struct RunRecord {
  Outcome outcome = Outcome::Censored;
  /// Flips to the first solution on success; the cutoff when censored.
  std::uint64_t flips = 0;
  std::uint64_t seed = 0;

  bool success() const { return outcome == Outcome::Success; }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Called after every flip with the flipped variable and the updated state.
using StepObserver = std::function<void(Var, const SearchState&)>;

/// One seeded trial. The solution check runs after initialization and after
/// every flip, so a satisfying initial assignment gives a run length of 0.
RunRecord run(const Formula& formula, const SolverConfig& config, std::uint64_t cutoff, std::uint64_t seed,
              const StepObserver& observer = {});

}  // namespace rtd
