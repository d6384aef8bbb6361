#include <doctest.h>

#include <set>

#include "rtd/error.hpp"
#include "rtd/instancegen.hpp"
#include "rtd/random.hpp"
#include "support/oracles.hpp"

using namespace rtd;

TEST_CASE("generate_random_3sat shape at the phase-transition size") {
  const Formula f = generate_random_3sat(100, 430, 42);
  CHECK(f.num_vars() == 100);
  REQUIRE(f.num_clauses() == 430);
  for (const Clause& c : f.clauses()) {
    REQUIRE(c.size() == 3);
    CHECK(std::set<Var>{c[0].var(), c[1].var(), c[2].var()}.size() == 3);
  }
}

TEST_CASE("generate_random_3sat with three variables uses all of them") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Formula f = generate_random_3sat(3, 1, seed);
    REQUIRE(f.num_clauses() == 1);
    const Clause& c = f.clause(0);
    CHECK(std::set<Var>{c[0].var(), c[1].var(), c[2].var()} == std::set<Var>{1, 2, 3});
  }
}

TEST_CASE("generate_random_3sat is deterministic in the seed and validates input") {
  CHECK(generate_random_3sat(50, 200, 9) == generate_random_3sat(50, 200, 9));
  CHECK_FALSE(generate_random_3sat(50, 200, 9) == generate_random_3sat(50, 200, 10));
  CHECK_THROWS_AS(generate_random_3sat(2, 1, 0), ContractViolation);
}

TEST_CASE("generate_random_3sat polarity and variable choice are unbiased") {
  const Formula f = generate_random_3sat(10, 20000, 5);
  std::vector<int> var_count(11, 0);
  int negative = 0;
  for (const Clause& c : f.clauses()) {
    for (Lit l : c) {
      ++var_count[l.var()];
      negative += l.is_negative();
    }
  }
  // 60000 literals: 6000 per variable, sd ~ 73; 30000 negative, sd ~ 122
  for (Var v = 1; v <= 10; ++v) CHECK(std::abs(var_count[v] - 6000) < 400);
  CHECK(std::abs(negative - 30000) < 700);
}

TEST_CASE("dpll_sat trivial cases") {
  CHECK(dpll_sat(Formula(1, {Clause{Lit(1)}, Clause{Lit(-1)}}), 0).status == DpllStatus::Unsat);
  const Formula f(3, {Clause{Lit(1), Lit(2), Lit(3)}});
  const DpllResult r = dpll_sat(f, 0);
  REQUIRE(r.status == DpllStatus::Sat);
  REQUIRE(r.model.has_value());
  CHECK(count_unsat(f, *r.model) == 0);
}

TEST_CASE("dpll_sat agrees with exhaustive enumeration on 200 random 20-variable formulas") {
  int sat = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Formula f = generate_random_3sat(20, 85, derive_seed(77, i));
    const bool expected = oracle::brute_force_sat(f);
    const DpllResult r = dpll_sat(f, i);
    REQUIRE(r.status != DpllStatus::BudgetExceeded);
    REQUIRE((r.status == DpllStatus::Sat) == expected);
    if (expected) {
      ++sat;
      REQUIRE(count_unsat(f, *r.model) == 0);
    }
  }
  // near the phase transition both verdicts must occur
  CHECK(sat > 20);
  CHECK(sat < 180);
}

TEST_CASE("dpll_sat on small formulas with mixed clause widths") {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(10));
    std::vector<Clause> cs;
    const auto m = 1 + rng.below(5 * n);
    for (std::uint64_t c = 0; c < m; ++c) {
      Clause clause;
      const auto w = 1 + rng.below(3);
      for (std::uint64_t k = 0; k < w; ++k) {
        const auto v = static_cast<int>(rng.below(n)) + 1;
        clause.emplace_back(rng.coin() ? v : -v);
      }
      cs.push_back(clause);
    }
    const Formula f(n, cs);
    const DpllResult r = dpll_sat(f, static_cast<std::uint64_t>(i));
    REQUIRE((r.status == DpllStatus::Sat) == oracle::brute_force_sat(f));
    if (r.model) REQUIRE(count_unsat(f, *r.model) == 0);
  }
}

TEST_CASE("dpll_sat reports budget overflow distinctly") {
  const Formula f = generate_random_3sat(60, 258, 1);
  const DpllResult r = dpll_sat(f, 0, DpllOptions{.node_limit = 2});
  CHECK(r.status == DpllStatus::BudgetExceeded);
  CHECK_FALSE(r.model.has_value());
}

TEST_CASE("build_test_set keeps only satisfiable candidates") {
  const TestSet set = build_test_set(20, 4.25, 10, 123);
  REQUIRE(set.instances.size() == 10);
  CHECK(set.descriptor == TestSetDescriptor{20, 85, 10, 123});
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    const Formula& f = set.instances[i];
    CHECK(f.num_clauses() == 85);
    CHECK(oracle::brute_force_sat(f));
    CHECK(f == generate_random_3sat(20, 85, derive_seed(123, set.candidate_indices[i])));
  }
  CHECK(set.discarded_count() == set.candidate_indices.back() + 1 - 10);
  // candidates that were skipped are exactly the unsatisfiable ones
  std::set<std::uint64_t> kept(set.candidate_indices.begin(), set.candidate_indices.end());
  for (std::uint64_t i = 0; i <= set.candidate_indices.back(); ++i) {
    if (kept.count(i)) continue;
    CHECK_FALSE(oracle::brute_force_sat(generate_random_3sat(20, 85, derive_seed(123, i))));
  }
}

TEST_CASE("build_test_set is deterministic and independent of thread count") {
  const TestSet a = build_test_set(30, 4.3, 1, 5);
  const TestSet b = build_test_set(30, 4.3, 1, 5);
  REQUIRE(a.instances.size() == 1);
  CHECK(a.instances == b.instances);
  const TestSet c = build_test_set(25, 4.3, 6, 11, TestSetOptions{.threads = 1});
  const TestSet d = build_test_set(25, 4.3, 6, 11, TestSetOptions{.threads = 4});
  CHECK(c.instances == d.instances);
  CHECK(c.candidate_indices == d.candidate_indices);
  CHECK_THROWS_AS(build_test_set(20, 4.3, 0, 1), ContractViolation);
}

TEST_CASE("build_test_set discards budget overflows instead of keeping them") {
  TestSetOptions options;
  options.dpll.node_limit = 3;
  options.threads = 1;
  // With a tiny budget only candidates decided almost by propagation alone
  // survive; nothing undecided may slip through.
  const TestSet set = build_test_set(12, 2.5, 3, 3, options);
  CHECK(set.discarded_budget > 0);
  for (const Formula& f : set.instances) CHECK(oracle::brute_force_sat(f));
  CHECK(set.discarded_budget + set.discarded_unsat == set.discarded_count());
}

TEST_CASE("phase-transition test set of the characterization size") {
  const TestSet set = build_test_set(100, kDefaultClauseRatio, 5, 2024);
  REQUIRE(set.instances.size() == 5);
  for (const Formula& f : set.instances) {
    CHECK(f.num_clauses() == 430);
    const DpllResult r = dpll_sat(f, 99);
    REQUIRE(r.status == DpllStatus::Sat);
    CHECK(count_unsat(f, *r.model) == 0);
  }
}
