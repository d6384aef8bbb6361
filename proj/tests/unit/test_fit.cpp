#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rtd/error.hpp"
#include "rtd/fit.hpp"
#include "rtd/random.hpp"

using namespace rtd;

namespace {

constexpr double kLn2 = std::numbers::ln2;

Rld exact_sample(const ModelCdf& model, std::uint64_t n, std::uint64_t seed, std::uint64_t cutoff = 1'000'000'000) {
  return sample_model(model, n, cutoff, seed);
}

}  // namespace

TEST_CASE("model_cdf examples") {
  const ModelCdf e = ModelCdf::exponential(100);
  CHECK(model_cdf(e, 100) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(model_cdf(e, 200) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(model_cdf(e, 0) == 0.0);
  const ModelCdf w = ModelCdf::weibull(100, 1.0);
  for (double x = 0; x < 2000; x += 7.3) CHECK(model_cdf(w, x) == doctest::Approx(model_cdf(e, x)).epsilon(1e-15));
  CHECK(model_cdf(ModelCdf::weibull(100, 0.5), 100) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.rate() == doctest::Approx(kLn2 / 100));
  CHECK_THROWS_AS(ModelCdf::exponential(0), ContractViolation);
  CHECK_THROWS_AS(ModelCdf::weibull(10, -1), ContractViolation);
}

TEST_CASE("exponential model is memoryless") {
  const ModelCdf e = ModelCdf::exponential(37.5);
  for (double a = 0; a < 300; a += 13.7) {
    for (double b = 0; b < 300; b += 11.1) {
      const double lhs = (e.cdf(a + b) - e.cdf(a)) / (1 - e.cdf(a));
      CHECK(std::abs(lhs - e.cdf(b)) < 1e-12);
    }
  }
}

TEST_CASE("model cdfs are nondecreasing and quantile inverts cdf") {
  for (const ModelCdf& m : {ModelCdf::exponential(50), ModelCdf::weibull(50, 0.3), ModelCdf::weibull(50, 4)}) {
    double last = 0.0;
    for (double x = 0; x < 5000; x += 0.9) {
      const double v = m.cdf(x);
      REQUIRE(v >= last);
      REQUIRE(v <= 1.0);
      last = v;
    }
    for (double p : {0.0, 0.01, 0.3, 0.5, 0.9, 0.999}) CHECK(m.cdf(m.quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("exp_quantile") {
  CHECK(std::abs(exp_quantile(100 * kLn2, 0.99) - 460.5) <= 0.5);
  CHECK(exp_quantile(80, 0.5) == doctest::Approx(80));
  CHECK(exp_quantile(80, 0.0) == 0.0);
  CHECK_THROWS_AS(exp_quantile(80, 1.0), ContractViolation);
}

TEST_CASE("sample_model discretizes by ceiling") {
  const ModelCdf e = ModelCdf::exponential(10);
  const Rld rld = sample_model(e, 200000, 1000, 1);
  for (double k : {1.0, 3.0, 10.0, 25.0}) CHECK(std::abs(rld.cdf(k) - e.cdf(k)) < 0.005);
}

TEST_CASE("fit_exponential recovers the median of ed[100]") {
  const FitResult r = fit_exponential(exact_sample(ModelCdf::exponential(100), 1000, 11));
  CHECK(r.model.family == Family::Exponential);
  CHECK(r.model.median >= 90);
  CHECK(r.model.median <= 110);
  CHECK(r.n_used == 1000);
  CHECK(r.n_censored == 0);
  REQUIRE(r.chi2.has_value());
  CHECK(r.chi2->dof == static_cast<int>(r.chi2->bins.size()) - 2);
  REQUIRE(r.empirical_median.has_value());
  CHECK(std::abs(static_cast<double>(*r.empirical_median) - 100.0) < 15.0);
}

TEST_CASE("fit_exponential envelope over 1000 replications") {
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const double m = fit_exponential(exact_sample(ModelCdf::exponential(100), 1000, derive_seed(1, seed))).model.median;
    inside += m >= 90 && m <= 110;
  }
  // the estimator's standard error is about 3.2 flips here
  CHECK(inside >= 990);
}

TEST_CASE("fit_exponential with half the trials censored at the median") {
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Rld rld = sample_model(ModelCdf::exponential(100), 1000, 100, derive_seed(2, seed));
    const FitResult r = fit_exponential(rld);
    inside += std::abs(r.model.median / 100.0 - 1.0) <= 0.15;
    if (seed == 0) {
      CHECK(r.n_censored > 400);
      CHECK(r.n_censored < 600);
    }
  }
  CHECK(inside >= 198);
}

TEST_CASE("fit_exponential on a point mass") {
  const Rld rld(std::vector<std::uint64_t>(40, 250), 40, 1000);
  const FitResult r = fit_exponential(rld);
  // ML mean equals the sample mean c, so the median is c ln 2
  CHECK(r.model.median == doctest::Approx(250 * kLn2).epsilon(1e-12));
  CHECK_THROWS_AS(fit_weibull(rld), FitError);
  CHECK_THROWS_WITH(fit_weibull(rld), doctest::Contains("fit failed"));
}

TEST_CASE("fits reject insufficient samples") {
  CHECK_THROWS_WITH_AS(fit_exponential(Rld({1, 2, 3}, 3, 10)), doctest::Contains("insufficient sample"), AnalysisError);
  CHECK_THROWS_AS(fit_weibull(Rld({1, 2, 3}, 3, 10)), AnalysisError);
}

TEST_CASE("censored exponential MLE matches the closed form") {
  // For shape 1 the ML mean is (sum of successes + censored * cutoff) / k.
  const Rld rld = sample_model(ModelCdf::exponential(200), 500, 150, 4);
  double total = static_cast<double>(rld.num_censored()) * 150.0;
  for (auto x : rld.successes()) total += static_cast<double>(x == 0 ? 0.5 : static_cast<double>(x));
  const double mean = total / static_cast<double>(rld.num_successes());
  CHECK(fit_exponential(rld).model.median == doctest::Approx(mean * kLn2).epsilon(1e-12));
}

TEST_CASE("fit_weibull shape envelopes") {
  int low_inside = 0;
  int unit_inside = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FitResult a = fit_weibull(exact_sample(ModelCdf::weibull(100, 0.5), 1000, derive_seed(3, seed)));
    low_inside += a.model.shape >= 0.4 && a.model.shape <= 0.6;
    const FitResult b = fit_weibull(exact_sample(ModelCdf::exponential(100), 1000, derive_seed(4, seed)));
    unit_inside += b.model.shape >= 0.9 && b.model.shape <= 1.1;
    if (seed == 0) {
      CHECK(a.shape_below_one());
      CHECK(a.shape_lr_p_value.value() < 1e-6);
      CHECK_FALSE(b.shape_below_one());
      CHECK_FALSE(b.shape_above_one());
      CHECK(b.shape_interval->lower < b.model.shape);
      CHECK(b.shape_interval->upper > b.model.shape);
      CHECK(a.chi2.has_value());
      CHECK(a.chi2->dof == static_cast<int>(a.chi2->bins.size()) - 3);
    }
  }
  CHECK(low_inside == 200);
  CHECK(unit_inside >= 198);
}

TEST_CASE("fit_weibull handles censoring and steep shapes") {
  const FitResult r = fit_weibull(sample_model(ModelCdf::weibull(1000, 2.0), 1000, 1200, 5));
  CHECK(r.model.shape == doctest::Approx(2.0).epsilon(0.1));
  CHECK(r.model.median == doctest::Approx(1000).epsilon(0.05));
  CHECK(r.shape_above_one());
}

TEST_CASE("Weibull fit with the shape fixed at 1 equals the exponential fit") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Rld rld = sample_model(ModelCdf::weibull(300, 0.7), 400, 2000, seed);
    CHECK(fit_weibull_fixed_shape(rld, 1.0).model.median == fit_exponential(rld).model.median);
  }
}

TEST_CASE("chi-square calibration on true exponential samples") {
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FitResult r = fit_exponential(exact_sample(ModelCdf::exponential(100), 1000, derive_seed(5, seed)));
    REQUIRE(r.chi2.has_value());
    pass += r.chi2->pass;
  }
  CHECK(pass >= 180);
  CHECK(pass <= 198);
}

TEST_CASE("chi-square rejects an exponential fit to wd[100, 0.5]") {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FitResult r = fit_exponential(exact_sample(ModelCdf::weibull(100, 0.5), 1000, derive_seed(6, seed)));
    REQUIRE(r.chi2.has_value());
    rejected += !r.chi2->pass;
  }
  CHECK(rejected >= 190);
}

TEST_CASE("chi-square on a sample laid on the model's own quantiles") {
  const ModelCdf e = ModelCdf::exponential(100);
  std::vector<std::uint64_t> sample;
  for (int i = 0; i < 1000; ++i) sample.push_back(static_cast<std::uint64_t>(std::ceil(e.quantile((i + 0.5) / 1000))));
  const ChiSquareResult r = chi_square_gof(Rld(sample, 1000, 1'000'000), e, GofOptions{.fitted_parameters = 0});
  CHECK(r.statistic < 0.5);
  CHECK(r.pass);
  CHECK(r.p_value > 0.99);
}

TEST_CASE("chi-square bins account for every trial") {
  const Rld rld = sample_model(ModelCdf::exponential(100), 800, 150, 9);
  const ChiSquareResult r = chi_square_gof(rld, ModelCdf::exponential(100));
  double observed = 0.0;
  double expected = 0.0;
  double statistic = 0.0;
  for (const ChiSquareBin& b : r.bins) {
    CHECK(b.expected >= 5.0);
    observed += b.observed;
    expected += b.expected;
    statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
  }
  CHECK(observed == 800);
  CHECK(expected == doctest::Approx(800));
  CHECK(std::isinf(r.bins.back().upper));
  CHECK(r.bins.back().observed == static_cast<double>(rld.num_censored()));
  CHECK(r.dof == static_cast<int>(r.bins.size()) - 2);
  CHECK(r.statistic == doctest::Approx(statistic));
  // reversing the bin order leaves the statistic unchanged
  double reversed = 0.0;
  for (auto it = r.bins.rbegin(); it != r.bins.rend(); ++it) {
    reversed += (it->observed - it->expected) * (it->observed - it->expected) / it->expected;
  }
  CHECK(reversed == doctest::Approx(r.statistic).epsilon(1e-12));
}

TEST_CASE("chi-square with left truncation keeps the head as one bin") {
  const Rld rld = sample_model(ModelCdf::exponential(100), 1000, 100000, 10);
  const ChiSquareResult r = chi_square_gof(rld, ModelCdf::exponential(100), GofOptions{.left_truncation = 20});
  CHECK(r.bins.front().lower == 0.0);
  CHECK(r.bins.front().upper == 20.0);
  CHECK(r.bins.front().observed == rld.cdf(20) * 1000);
}

TEST_CASE("chi-square refuses tiny samples") {
  CHECK_THROWS_WITH_AS(chi_square_gof(Rld({1, 2, 3}, 3, 10), ModelCdf::exponential(2)),
                       doctest::Contains("sample too small for GOF"), AnalysisError);
  // enough successes but all in one expected bin
  const Rld lumped(std::vector<std::uint64_t>(60, 1), 60, 1);
  CHECK_THROWS_WITH_AS(chi_square_gof(lumped, ModelCdf::exponential(1000)),
                       doctest::Contains("sample too small for GOF"), AnalysisError);
}
