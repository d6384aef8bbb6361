#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rtd/cnf.hpp"

namespace rtd {

/// Incremental scoring state for GSAT-family local search.
///
/// Clauses are normalized on construction: repeated literals are collapsed
/// and tautological clauses are dropped, since they can never be falsified.
/// Per clause we keep the number of true literals and the XOR of the
/// variables of its true literals, so that when exactly one literal is true
/// its variable is available in O(1). A flip touches only the clauses in
/// the flipped variable's occurrence lists.
class SearchState {
 public:
  SearchState(const Formula& formula, Assignment initial);

  void flip(Var v);

  const Assignment& assignment() const { return assignment_; }
  std::uint32_t num_vars() const { return num_vars_; }
  std::size_t num_unsat() const { return unsat_.size(); }

  /// Indices (into the normalized clause list) of the currently false clauses.
  std::span<const std::uint32_t> unsat_clauses() const { return unsat_; }
  std::span<const Lit> clause(std::uint32_t c) const {
    return {lits_.data() + clause_offset_[c], clause_offset_[c + 1] - clause_offset_[c]};
  }

  /// Clauses that become false if `v` is flipped.
  int break_count(Var v) const { return break_[v]; }
  /// False clauses that become true if `v` is flipped.
  int make_count(Var v) const { return make_[v]; }
  /// Change in the number of false clauses caused by flipping `v`.
  int score_delta(Var v) const { return break_[v] - make_[v]; }

 private:
  std::span<const std::uint32_t> occurrences(Lit lit) const {
    const std::size_t i = literal_slot(lit);
    return {occ_.data() + occ_offset_[i], occ_offset_[i + 1] - occ_offset_[i]};
  }
  static std::size_t literal_slot(Lit lit) { return 2 * (lit.var() - 1) + (lit.is_negative() ? 1 : 0); }

  void mark_unsat(std::uint32_t c);
  void mark_sat(std::uint32_t c);

  std::uint32_t num_vars_;
  Assignment assignment_;
  std::vector<Lit> lits_;
  std::vector<std::uint32_t> clause_offset_;
  std::vector<std::uint32_t> occ_offset_;
  std::vector<std::uint32_t> occ_;
  std::vector<std::uint32_t> true_count_;
  std::vector<Var> true_xor_;
  std::vector<int> break_;
  std::vector<int> make_;
  std::vector<std::uint32_t> unsat_;
  std::vector<std::uint32_t> unsat_pos_;
};

}  // namespace rtd
