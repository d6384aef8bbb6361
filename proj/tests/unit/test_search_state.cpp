#include <doctest.h>

#include <algorithm>

#include "rtd/cnf.hpp"
#include "rtd/random.hpp"
#include "rtd/search_state.hpp"
#include "support/oracles.hpp"

using namespace rtd;

namespace {

Formula small_formula(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Clause> cs;
  for (std::uint32_t c = 0; c < m; ++c) {
    Clause clause;
    const auto width = 1 + rng.below(4);
    for (std::uint64_t k = 0; k < width; ++k) {
      const auto v = static_cast<int>(rng.below(n)) + 1;
      clause.emplace_back(rng.coin() ? v : -v);
    }
    cs.push_back(std::move(clause));
  }
  return Formula(n, std::move(cs));
}

// Clauses that are unsatisfied-after minus unsatisfied-before, counted directly.
void check_against_recount(const Formula& f, const SearchState& s) {
  const Assignment& a = s.assignment();
  REQUIRE(s.num_unsat() == oracle::naive_unsat(f, a));
  const auto base = static_cast<int>(oracle::naive_unsat(f, a));
  for (Var v = 1; v <= f.num_vars(); ++v) {
    Assignment b = a;
    b.flip(v);
    int breaks = 0;
    int makes = 0;
    for (const Clause& clause : f.clauses()) {
      const bool before = clause_satisfied(clause, a);
      const bool after = clause_satisfied(clause, b);
      if (before && !after) ++breaks;
      if (!before && after) ++makes;
    }
    REQUIRE(s.score_delta(v) == static_cast<int>(oracle::naive_unsat(f, b)) - base);
    REQUIRE(s.break_count(v) == breaks);
    REQUIRE(s.make_count(v) == makes);
  }
}

}  // namespace

TEST_CASE("incremental scores agree with recount along random flip sequences") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(seed % 11);
    const Formula f = small_formula(n, 5 * n, seed);
    Rng rng(seed ^ 0xabcdef);
    SearchState s(f, Assignment::random(n, rng));
    check_against_recount(f, s);
    for (int step = 0; step < 60; ++step) {
      s.flip(static_cast<Var>(rng.below(n)) + 1);
      check_against_recount(f, s);
    }
  }
}

TEST_CASE("unsat list holds exactly the false clauses") {
  const Formula f(3, {Clause{Lit(1), Lit(2)}, Clause{Lit(-1)}, Clause{Lit(3), Lit(-3)}, Clause{Lit(-2), Lit(-2)}});
  SearchState s(f, Assignment(3, true));
  // the tautology is dropped; clauses 1 and 3 are false
  CHECK(s.num_unsat() == 2);
  for (std::uint32_t c : s.unsat_clauses()) {
    for (Lit lit : s.clause(c)) CHECK_FALSE(s.assignment().satisfies(lit));
  }
  s.flip(1);
  CHECK(s.num_unsat() == 1);
  s.flip(2);
  // now only (x1 or x2) is false
  REQUIRE(s.num_unsat() == 1);
  CHECK(s.clause(s.unsat_clauses()[0]).size() == 2);
  s.flip(1);
  CHECK(s.num_unsat() == 1);
  CHECK(s.unsat_clauses().size() == 1);
}
