#include <doctest.h>

#include "rtd/error.hpp"
#include "rtd/instancegen.hpp"
#include "rtd/random.hpp"
#include "rtd/search_state.hpp"
#include "rtd/sls.hpp"
#include "support/oracles.hpp"

using namespace rtd;

namespace {

const SolverConfig kAll[] = {SolverConfig::gsat(), SolverConfig::gwsat(0.5), SolverConfig::wsat(0.5)};

}  // namespace

TEST_CASE("single-variable formula is solved at init or after one flip") {
  const Formula f(1, {Clause{Lit(1)}});
  for (const SolverConfig& config : kAll) {
    int zeros = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const RunRecord r = run(f, config, 10, seed);
      REQUIRE(r.success());
      REQUIRE(r.flips <= 1);
      CHECK(r.seed == seed);
      zeros += r.flips == 0;
    }
    CHECK(zeros > 60);
    CHECK(zeros < 140);
  }
}

TEST_CASE("unsatisfiable formula is censored at the cutoff") {
  const Formula f(1, {Clause{Lit(1)}, Clause{Lit(-1)}});
  for (const SolverConfig& config : kAll) {
    const RunRecord r = run(f, config, 1000, 3);
    CHECK(r.outcome == Outcome::Censored);
    CHECK(r.flips == 1000);
  }
}

TEST_CASE("runs are deterministic in their seed") {
  const Formula f = generate_random_3sat(50, 200, 4);
  for (const SolverConfig& config : kAll) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CHECK(run(f, config, 5000, seed) == run(f, config, 5000, seed));
    }
  }
}

TEST_CASE("invalid configurations are rejected") {
  const Formula f(1, {Clause{Lit(1)}});
  CHECK_THROWS_AS(run(f, SolverConfig{Algorithm::Wsat, std::nullopt, std::nullopt}, 10, 0), ContractViolation);
  CHECK_THROWS_AS(run(f, SolverConfig{Algorithm::Gsat, 0.1, std::nullopt}, 10, 0), ContractViolation);
  CHECK_THROWS_AS(run(f, SolverConfig{Algorithm::Gwsat, 0.1, 0.2}, 10, 0), ContractViolation);
  CHECK_THROWS_AS(run(f, SolverConfig::wsat(1.5), 10, 0), ContractViolation);
  CHECK_THROWS_AS(run(f, SolverConfig::wsat(0.5), 0, 0), ContractViolation);
  CHECK_THROWS_AS(algorithm_from_string("novelty"), ContractViolation);
}

TEST_CASE("config tags and completeness") {
  CHECK(SolverConfig::wsat(0.55).tag() == "wsat-n0.55");
  CHECK(SolverConfig::gwsat(0.5).tag() == "gwsat-wp0.5");
  CHECK(SolverConfig::gsat().tag() == "gsat");
  CHECK(SolverConfig::gsat().completeness() == CompletenessClass::EssentiallyIncomplete);
  CHECK(SolverConfig::gwsat(0.1).completeness() == CompletenessClass::ApproximatelyComplete);
  CHECK(algorithm_from_string("gwsat") == Algorithm::Gwsat);
}

TEST_CASE("every step flips one variable and incremental state matches recount") {
  const Formula f = generate_random_3sat(12, 50, 8);
  for (const SolverConfig& config : kAll) {
    Assignment previous;
    std::uint64_t steps = 0;
    bool first = true;
    const RunRecord r = run(f, config, 2000, 17, [&](Var v, const SearchState& s) {
      const Assignment& now = s.assignment();
      if (!first) {
        std::size_t changed = 0;
        for (Var u = 1; u <= f.num_vars(); ++u) changed += now[u] != previous[u];
        REQUIRE(changed == 1);
        REQUIRE(now[v] != previous[v]);
      }
      first = false;
      previous = now;
      ++steps;
      REQUIRE(s.num_unsat() == oracle::naive_unsat(f, now));
    });
    if (r.success()) CHECK(steps == r.flips);
  }
}

TEST_CASE("replaying a seed reproduces the flip sequence") {
  const Formula f = generate_random_3sat(40, 170, 2);
  for (const SolverConfig& config : kAll) {
    std::vector<Var> a, b;
    run(f, config, 3000, 99, [&](Var v, const SearchState&) { a.push_back(v); });
    run(f, config, 3000, 99, [&](Var v, const SearchState&) { b.push_back(v); });
    CHECK(a == b);
    CHECK_FALSE(a.empty());
  }
}

TEST_CASE("GSAT steps never pick a worse variable than the best") {
  const Formula f = generate_random_3sat(30, 128, 6);
  Assignment before;
  bool have = false;
  run(f, SolverConfig::gsat(), 500, 1, [&](Var v, const SearchState& s) {
    if (have) {
      int best = 1 << 30;
      int chosen = 0;
      for (Var u = 1; u <= f.num_vars(); ++u) {
        Assignment b = before;
        b.flip(u);
        const int delta = static_cast<int>(oracle::naive_unsat(f, b)) - static_cast<int>(oracle::naive_unsat(f, before));
        best = std::min(best, delta);
        if (u == v) chosen = delta;
      }
      REQUIRE(chosen == best);
    }
    before = s.assignment();
    have = true;
  });
}

TEST_CASE("WSAT flips a variable of a false clause, preferring zero break") {
  const Formula f = generate_random_3sat(30, 128, 12);
  Assignment before;
  bool have = false;
  run(f, SolverConfig::wsat(0.0), 500, 5, [&](Var v, const SearchState& s) {
    if (have) {
      // v must appear in some clause false before the flip; with noise 0
      // its break count is minimal among the variables of some such clause.
      bool ok = false;
      for (const Clause& clause : f.clauses()) {
        if (clause_satisfied(clause, before)) continue;
        bool contains = false;
        for (Lit l : clause) contains = contains || l.var() == v;
        if (!contains) continue;
        auto breaks = [&](Var u) {
          Assignment b = before;
          b.flip(u);
          int count = 0;
          for (const Clause& c : f.clauses()) count += clause_satisfied(c, before) && !clause_satisfied(c, b);
          return count;
        };
        int best = 1 << 30;
        for (Lit l : clause) best = std::min(best, breaks(l.var()));
        if (breaks(v) == best) ok = true;
      }
      REQUIRE(ok);
    }
    before = s.assignment();
    have = true;
  });
}

TEST_CASE("GWSAT is approximately complete on small satisfiable formulas") {
  int checked = 0;
  for (std::uint64_t i = 0; checked < 5; ++i) {
    const Formula f = generate_random_3sat(12, 51, derive_seed(31, i));
    if (!oracle::brute_force_sat(f)) continue;
    ++checked;
    int successes = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) successes += run(f, SolverConfig::gwsat(0.4), 1'000'000, derive_seed(i, t)).success();
    CHECK(successes >= 990);
  }
}
