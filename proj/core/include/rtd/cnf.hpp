#pragma once

#include <cstdint>
#include <cstdlib>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rtd {

class Rng;

/// 1-based variable index, as in DIMACS.
using Var = std::uint32_t;

/// A signed literal. Constructed from its DIMACS integer (`-3` is "not x3").
class Lit {
 public:
  constexpr Lit() = default;
  constexpr explicit Lit(int dimacs) : code_(dimacs) {}
  static constexpr Lit positive(Var v) { return Lit(static_cast<int>(v)); }
  static constexpr Lit negative(Var v) { return Lit(-static_cast<int>(v)); }

  constexpr Var var() const { return static_cast<Var>(code_ < 0 ? -code_ : code_); }
  constexpr bool is_negative() const { return code_ < 0; }
  constexpr int dimacs() const { return code_; }
  constexpr Lit operator~() const { return Lit(-code_); }

  friend constexpr bool operator==(Lit, Lit) = default;

 private:
  int code_ = 0;
};

using Clause = std::vector<Lit>;

/// Truth assignment over variables 1..size().
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars, bool value = false) : values_(num_vars, value ? 1 : 0) {}

  static Assignment random(std::size_t num_vars, Rng& rng);

  std::size_t size() const { return values_.size(); }
  bool operator[](Var v) const { return values_[v - 1] != 0; }
  void set(Var v, bool value) { values_[v - 1] = value ? 1 : 0; }
  void flip(Var v) { values_[v - 1] ^= 1; }

  bool satisfies(Lit lit) const { return (*this)[lit.var()] != lit.is_negative(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

/// CNF formula. Immutable after construction; the constructor checks that
/// every clause is nonempty and every variable lies in [1, num_vars], and
/// builds per-variable occurrence lists.
class Formula {
 public:
  Formula(std::uint32_t num_vars, std::vector<Clause> clauses);

  std::uint32_t num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_[i]; }

  /// Indices of the clauses mentioning `v` (each clause listed once).
  std::span<const std::uint32_t> occurrences(Var v) const {
    return {occ_index_.data() + occ_offset_[v - 1], occ_offset_[v] - occ_offset_[v - 1]};
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

 private:
  std::uint32_t num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::uint32_t> occ_offset_;
  std::vector<std::uint32_t> occ_index_;
};

/// Metadata tag for how a Las Vegas algorithm behaves as run time grows.
enum class CompletenessClass { Complete, ApproximatelyComplete, EssentiallyIncomplete };

std::string_view to_string(CompletenessClass c);

bool clause_satisfied(const Clause& clause, const Assignment& a);

/// Number of clauses with no true literal under `a`.
std::size_t count_unsat(const Formula& formula, const Assignment& a);

/// count_unsat after flipping `v` minus count_unsat before. Only visits the
/// clauses containing `v`.
int flip_delta(const Formula& formula, const Assignment& a, Var v);

Formula parse_dimacs(std::istream& in);
Formula parse_dimacs(std::string_view text);

/// Writes `p cnf <vars> <clauses>` followed by one 0-terminated clause per line.
void write_dimacs(std::ostream& out, const Formula& formula);
std::string to_dimacs(const Formula& formula);

}  // namespace rtd
