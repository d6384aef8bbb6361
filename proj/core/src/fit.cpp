#include "rtd/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rtd/error.hpp"
#include "rtd/random.hpp"

namespace rtd {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// A run length of 0 (solved by the initial assignment) has no finite
// Weibull log-density; it enters the likelihood as half a flip instead.
constexpr double kZeroRunLength = 0.5;

}  // namespace

std::string_view to_string(Family family) {
  return family == Family::Exponential ? "exponential" : "weibull";
}

ModelCdf ModelCdf::exponential(double median) {
  require(median > 0.0 && std::isfinite(median), "median must be positive and finite");
  return {Family::Exponential, median, 1.0};
}

ModelCdf ModelCdf::weibull(double median, double shape) {
  require(median > 0.0 && std::isfinite(median), "median must be positive and finite");
  require(shape > 0.0 && std::isfinite(shape), "shape must be positive and finite");
  return {Family::Weibull, median, shape};
}

double ModelCdf::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  const double z = family == Family::Exponential ? x / median : std::pow(x / median, shape);
  return -std::expm1(-kLn2 * z);
}

double ModelCdf::survival(double x) const {
  if (!(x > 0.0)) return 1.0;
  const double z = family == Family::Exponential ? x / median : std::pow(x / median, shape);
  return std::exp(-kLn2 * z);
}

double ModelCdf::quantile(double p) const {
  require(p >= 0.0 && p < 1.0, "quantile level must lie in [0, 1)");
  const double z = -std::log1p(-p) / kLn2;
  return family == Family::Exponential ? median * z : median * std::pow(z, 1.0 / shape);
}

double ModelCdf::rate() const { return kLn2 / median; }

double model_cdf(const ModelCdf& model, double x) { return model.cdf(x); }

double exp_quantile(double median, double p) {
  require(p >= 0.0 && p < 1.0, "probability must lie in [0, 1)");
  return median * (-std::log1p(-p) / kLn2);
}

ChiSquareResult chi_square_gof(const Rld& rld, const ModelCdf& model, const GofOptions& options) {
  if (rld.num_successes() < options.min_successes) {
    throw AnalysisError("sample too small for GOF: " + std::to_string(rld.num_successes()) + " successes, need " +
                        std::to_string(options.min_successes));
  }
  const auto cutoff = static_cast<double>(rld.cutoff());
  const auto left = static_cast<double>(options.left_truncation);
  require(left < cutoff, "left truncation point must lie below the cutoff");
  const auto n = static_cast<double>(rld.n_trials());
  const auto successes = rld.successes();
  auto count_upto = [&](double x) {
    return static_cast<double>(std::upper_bound(successes.begin(), successes.end(), x,
                                                [](double v, std::uint64_t s) { return v < static_cast<double>(s); }) -
                               successes.begin());
  };

  const double f_left = model.cdf(left);
  const double f_cut = model.cdf(cutoff);
  const double in_range = count_upto(cutoff) - count_upto(left);
  std::size_t initial = options.initial_bins;
  if (initial == 0) initial = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(2.0 * std::pow(in_range, 0.4))));

  std::vector<double> edges{left};
  for (std::size_t j = 1; j < initial; ++j) {
    const double q = f_left + (f_cut - f_left) * static_cast<double>(j) / static_cast<double>(initial);
    if (!(q < 1.0)) break;
    const double edge = std::floor(model.quantile(q));
    if (edge > edges.back() && edge < cutoff) edges.push_back(edge);
  }
  if (cutoff > edges.back()) edges.push_back(cutoff);

  std::vector<ChiSquareBin> raw;
  if (options.left_truncation > 0) raw.push_back({0.0, left, count_upto(left), n * f_left});
  for (std::size_t j = 1; j < edges.size(); ++j) {
    raw.push_back({edges[j - 1], edges[j], count_upto(edges[j]) - count_upto(edges[j - 1]),
                   n * (model.cdf(edges[j]) - model.cdf(edges[j - 1]))});
  }
  const double tail_expected = n * model.survival(cutoff);
  const auto tail_observed = static_cast<double>(rld.num_censored());
  if (tail_expected > 0.0 || tail_observed > 0.0) {
    raw.push_back({cutoff, std::numeric_limits<double>::infinity(), tail_observed, tail_expected});
  }

  ChiSquareResult result;
  result.significance = options.significance;
  std::optional<ChiSquareBin> pending;
  for (const ChiSquareBin& bin : raw) {
    if (!pending) {
      pending = bin;
    } else {
      pending->upper = bin.upper;
      pending->observed += bin.observed;
      pending->expected += bin.expected;
    }
    if (pending->expected >= options.min_expected) {
      result.bins.push_back(*pending);
      pending.reset();
    }
  }
  if (pending) {
    if (result.bins.empty()) {
      result.bins.push_back(*pending);
    } else {
      result.bins.back().upper = pending->upper;
      result.bins.back().observed += pending->observed;
      result.bins.back().expected += pending->expected;
    }
  }

  const int params = options.fitted_parameters.value_or(model.num_parameters());
  result.dof = static_cast<int>(result.bins.size()) - 1 - params;
  if (result.bins.size() < 3 || result.dof < 1) {
    throw AnalysisError("sample too small for GOF: " + std::to_string(result.bins.size()) +
                        " bins after merging, " + std::to_string(params) + " fitted parameters");
  }
  for (const ChiSquareBin& bin : result.bins) {
    const double d = bin.observed - bin.expected;
    result.statistic += d * d / bin.expected;
  }
  result.p_value = boost::math::gamma_q(result.dof / 2.0, result.statistic / 2.0);
  result.pass = result.p_value >= options.significance;
  return result;
}

namespace {

// Sample prepared for censored likelihood evaluation. Run lengths are
// scaled by the largest observation (success or cutoff) so that powers stay
// in range for any shape.
struct CensoredSample {
  std::vector<double> y;  // scaled successes
  double censored_y = 1.0;
  double censored = 0.0;
  double k = 0.0;
  double log_scale = 0.0;
  double sum_log_y = 0.0;
};

CensoredSample prepare(const Rld& rld, std::size_t min_successes) {
  if (rld.num_successes() < std::max<std::size_t>(min_successes, 1)) {
    throw AnalysisError("insufficient sample: " + std::to_string(rld.num_successes()) + " successes, need " +
                        std::to_string(std::max<std::size_t>(min_successes, 1)));
  }
  CensoredSample s;
  s.k = static_cast<double>(rld.num_successes());
  s.censored = static_cast<double>(rld.num_censored());
  double top = static_cast<double>(rld.successes().back());
  if (s.censored > 0) top = std::max(top, static_cast<double>(rld.cutoff()));
  top = std::max(top, kZeroRunLength);
  s.log_scale = std::log(top);
  s.y.reserve(rld.num_successes());
  for (std::uint64_t x : rld.successes()) {
    const double v = x == 0 ? kZeroRunLength : static_cast<double>(x);
    s.y.push_back(v / top);
    s.sum_log_y += std::log(v / top);
  }
  s.censored_y = static_cast<double>(rld.cutoff()) / top;
  return s;
}

struct ProfileTerms {
  double sum_pow = 0.0;      // sum over all trials of y^a
  double sum_pow_log = 0.0;  // sum over all trials of y^a ln y
};

ProfileTerms profile_terms(const CensoredSample& s, double a) {
  ProfileTerms t;
  for (double y : s.y) {
    const double p = std::pow(y, a);
    t.sum_pow += p;
    t.sum_pow_log += p * std::log(y);
  }
  if (s.censored > 0) {
    const double p = std::pow(s.censored_y, a);
    t.sum_pow += s.censored * p;
    t.sum_pow_log += s.censored * p * std::log(s.censored_y);
  }
  return t;
}

// Profile log-likelihood in shape a, the scale maximized out.
double profile_loglik(const CensoredSample& s, double a) {
  const ProfileTerms t = profile_terms(s, a);
  return s.k * std::log(a) - s.k * std::log(t.sum_pow / s.k) + (a - 1.0) * s.sum_log_y - s.k - s.k * s.log_scale;
}

// Derivative of the profile log-likelihood; strictly decreasing in a.
double profile_score(const CensoredSample& s, double a) {
  const ProfileTerms t = profile_terms(s, a);
  return s.k / a + s.sum_log_y - s.k * t.sum_pow_log / t.sum_pow;
}

double median_at_shape(const CensoredSample& s, double a) {
  const ProfileTerms t = profile_terms(s, a);
  const double log_scale = std::log(t.sum_pow / s.k) / a + s.log_scale;
  return std::exp(log_scale + std::log(kLn2) / a);
}

FitResult finish(const Rld& rld, ModelCdf model, double loglik, const FitOptions& options) {
  FitResult r;
  r.model = model;
  r.n_used = rld.num_successes();
  r.n_censored = rld.num_censored();
  r.log_likelihood = loglik;
  if (rld.success_rate() >= 0.5) r.empirical_median = rld.percentile(0.5);
  if (rld.num_successes() >= options.gof.min_successes) {
    try {
      r.chi2 = chi_square_gof(rld, model, options.gof);
    } catch (const AnalysisError&) {
      // too few bins after merging: the fit stands without a GOF verdict
    }
  }
  return r;
}

std::string diagnostics(const CensoredSample& s, double lo, double hi) {
  std::ostringstream out;
  out << "k=" << s.k << " censored=" << s.censored << " score(" << lo << ")=" << profile_score(s, lo) << " score("
      << hi << ")=" << profile_score(s, hi);
  return out.str();
}

// Root of a strictly decreasing function by bisection in log space.
template <typename F>
double bisect_log(F&& f, double lo, double hi, double rel_tol, int& iterations) {
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  while (log_hi - log_lo > rel_tol) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (f(std::exp(mid)) > 0.0) log_lo = mid;
    else log_hi = mid;
    ++iterations;
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

constexpr double kShapeMin = 1e-3;
constexpr double kShapeMax = 1e3;

}  // namespace

FitResult fit_weibull_fixed_shape(const Rld& rld, double shape, const FitOptions& options) {
  require(shape > 0.0 && std::isfinite(shape), "shape must be positive and finite");
  const CensoredSample s = prepare(rld, options.min_successes);
  const double m = median_at_shape(s, shape);
  const ModelCdf model = shape == 1.0 ? ModelCdf::exponential(m) : ModelCdf::weibull(m, shape);
  FitOptions opts = options;
  opts.gof.fitted_parameters = options.gof.fitted_parameters.value_or(1);
  return finish(rld, model, profile_loglik(s, shape), opts);
}

FitResult fit_exponential(const Rld& rld, const FitOptions& options) {
  return fit_weibull_fixed_shape(rld, 1.0, options);
}

FitResult fit_weibull(const Rld& rld, const FitOptions& options) {
  require(options.confidence > 0.0 && options.confidence < 1.0, "confidence must lie in (0, 1)");
  const CensoredSample s = prepare(rld, options.min_successes);
  auto score = [&](double a) { return profile_score(s, a); };

  if (!(score(kShapeMin) > 0.0) || !(score(kShapeMax) < 0.0)) {
    throw FitError("fit failed: shape maximum not bracketed in [" + std::to_string(kShapeMin) + ", " +
                   std::to_string(kShapeMax) + "]; " + diagnostics(s, kShapeMin, kShapeMax));
  }
  int iterations = 0;
  const double shape = bisect_log(score, kShapeMin, kShapeMax, options.tolerance, iterations);
  const double best = profile_loglik(s, shape);
  if (!std::isfinite(best)) {
    throw FitError("fit failed: non-finite log-likelihood at shape " + std::to_string(shape) + "; " +
                   diagnostics(s, kShapeMin, kShapeMax));
  }

  FitOptions opts = options;
  opts.gof.fitted_parameters = options.gof.fitted_parameters.value_or(2);
  FitResult r = finish(rld, ModelCdf::weibull(median_at_shape(s, shape), shape), best, opts);
  r.iterations = iterations;

  // Profile-likelihood interval: shapes whose log-likelihood drop stays
  // below half the chi-square(1) quantile.
  const double drop = 0.5 * boost::math::quantile(boost::math::chi_squared(1.0), options.confidence);
  auto excess = [&](double a) { return best - profile_loglik(s, a) - drop; };
  ShapeInterval interval{kShapeMin, kShapeMax, options.confidence};
  if (excess(kShapeMin) > 0.0) {
    interval.lower = bisect_log([&](double a) { return excess(a); }, kShapeMin, shape, options.tolerance, iterations);
  }
  if (excess(kShapeMax) > 0.0) {
    interval.upper =
        bisect_log([&](double a) { return -excess(a); }, shape, kShapeMax, options.tolerance, iterations);
  }
  r.shape_interval = interval;
  const double lr = std::max(0.0, 2.0 * (best - profile_loglik(s, 1.0)));
  r.shape_lr_p_value = boost::math::gamma_q(0.5, lr / 2.0);
  return r;
}

Rld sample_model(const ModelCdf& model, std::uint64_t n, std::uint64_t cutoff, std::uint64_t seed,
                 Provenance provenance) {
  require(n >= 1, "sample size must be at least 1");
  Rng rng(seed);
  std::vector<std::uint64_t> successes;
  successes.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = std::ceil(model.quantile(rng.uniform()));
    if (x <= static_cast<double>(cutoff)) successes.push_back(static_cast<std::uint64_t>(x));
  }
  provenance.base_seed = seed;
  return Rld(std::move(successes), n, cutoff, std::move(provenance));
}

}  // namespace rtd
