#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtd/cnf.hpp"

namespace rtd {

/// Uniform Random-3-SAT: each clause draws 3 distinct variables uniformly and
/// an independent fair-coin polarity per literal. Duplicate clauses across
/// the formula are allowed. Deterministic in `seed`.
Formula generate_random_3sat(std::uint32_t num_vars, std::uint32_t num_clauses, std::uint64_t seed);

enum class DpllStatus { Sat, Unsat, BudgetExceeded };

struct DpllResult {
  DpllStatus status = DpllStatus::Unsat;
  std::optional<Assignment> model;
  std::uint64_t nodes = 0;
};

struct DpllOptions {
  /// Maximum number of search nodes before giving up (0 = unlimited).
  std::uint64_t node_limit = 0;
};

/// Complete DPLL with unit propagation and pure-literal elimination. Branches
/// on a variable occurring in a shortest open clause; the variable and the
/// first polarity are chosen uniformly by `seed`.
DpllResult dpll_sat(const Formula& formula, std::uint64_t seed, const DpllOptions& options = {});

struct TestSetDescriptor {
  std::uint32_t num_vars = 0;
  std::uint32_t num_clauses = 0;
  std::uint32_t count = 0;
  std::uint64_t base_seed = 0;

  friend bool operator==(const TestSetDescriptor&, const TestSetDescriptor&) = default;
};

struct TestSet {
  TestSetDescriptor descriptor;
  std::vector<Formula> instances;
  /// Candidate index each instance was generated from.
  std::vector<std::uint64_t> candidate_indices;
  /// Candidates rejected as unsatisfiable.
  std::uint64_t discarded_unsat = 0;
  /// Candidates rejected because DPLL hit its node budget.
  std::uint64_t discarded_budget = 0;

  std::uint64_t discarded_count() const { return discarded_unsat + discarded_budget; }
};

inline constexpr double kDefaultClauseRatio = 4.3;

struct TestSetOptions {
  DpllOptions dpll{.node_limit = 50'000'000};
  unsigned threads = 0;
};

/// Generates candidates with seed derive_seed(base_seed, i) for i = 0, 1, ...
/// and keeps the first `count` that DPLL proves satisfiable.
/// num_clauses = round(clause_ratio * num_vars).
TestSet build_test_set(std::uint32_t num_vars, double clause_ratio, std::uint32_t count, std::uint64_t base_seed,
                       const TestSetOptions& options = {});

}  // namespace rtd
