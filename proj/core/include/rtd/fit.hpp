#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rtd/error.hpp"
#include "rtd/rld.hpp"

namespace rtd {

enum class Family { Exponential, Weibull };

std::string_view to_string(Family family);

/// Base-2 parameterized run-length model, F(x) = 1 - 2^-((x/m)^shape).
/// `median` is m (F(m) = 1/2); the exponential family has shape 1.
struct ModelCdf {
  Family family = Family::Exponential;
  double median = 1.0;
  double shape = 1.0;

  static ModelCdf exponential(double median);
  static ModelCdf weibull(double median, double shape);

  double cdf(double x) const;
  double survival(double x) const;
  /// Inverse cdf for p in [0, 1).
  double quantile(double p) const;
  /// Base-e rate ln(2)/m of the exponential model (for interoperability).
  double rate() const;
  int num_parameters() const { return family == Family::Exponential ? 1 : 2; }

  friend bool operator==(const ModelCdf&, const ModelCdf&) = default;
};

double model_cdf(const ModelCdf& model, double x);

/// t = m * log2(1 / (1 - p)), the p-quantile of ed[m].
double exp_quantile(double median, double p);

struct ChiSquareBin {
  double lower = 0.0;  // exclusive (inclusive for the first bin)
  double upper = 0.0;  // inclusive; +inf for the censored tail bin
  double observed = 0.0;
  double expected = 0.0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double significance = 0.05;
  bool pass = true;
  std::vector<ChiSquareBin> bins;
};

struct GofOptions {
  double significance = 0.05;
  double min_expected = 5.0;
  /// Number of equal-probability bins before merging (0 = ceil(2 n^0.4)).
  std::size_t initial_bins = 0;
  /// Run lengths <= this value form a single bin instead of being binned by
  /// quantile. 0 tests the full support.
  std::uint64_t left_truncation = 0;
  /// Parameters estimated from the same data (defaults to the model's count).
  std::optional<int> fitted_parameters;
  std::size_t min_successes = 50;
};

/// Pearson chi-square test of the RLD against `model` restricted to
/// [0, cutoff]. Censored trials form their own tail bin. Bin edges sit on
/// whole flips at the model's equal-probability quantiles; adjacent bins are
/// merged until each expects at least `min_expected` runs.
ChiSquareResult chi_square_gof(const Rld& rld, const ModelCdf& model, const GofOptions& options = {});

struct ShapeInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

struct FitOptions {
  std::size_t min_successes = 30;
  /// Confidence level of the profile-likelihood interval for the shape.
  double confidence = 0.95;
  GofOptions gof;
  /// Relative tolerance of the shape search.
  double tolerance = 1e-9;
};

struct FitResult {
  ModelCdf model;
  std::size_t n_used = 0;
  std::uint64_t n_censored = 0;
  double log_likelihood = 0.0;
  /// Attached when the sample is large enough for the test.
  std::optional<ChiSquareResult> chi2;
  /// Empirical median for comparison with the fitted m (median matching);
  /// absent if fewer than half the runs succeeded.
  std::optional<std::uint64_t> empirical_median;
  /// Weibull only.
  std::optional<ShapeInterval> shape_interval;
  /// Likelihood-ratio test of shape == 1 (Weibull only).
  std::optional<double> shape_lr_p_value;
  int iterations = 0;

  bool shape_below_one() const { return shape_interval && shape_interval->upper < 1.0; }
  bool shape_above_one() const { return shape_interval && shape_interval->lower > 1.0; }
};

/// Maximum-likelihood ed[m] with right-censoring at the cutoff.
FitResult fit_exponential(const Rld& rld, const FitOptions& options = {});

/// Maximum-likelihood wd[m, shape] with right-censoring. The scale is
/// profiled out in closed form and the shape found by bisection on the
/// profile score. Throws FitError if the optimum cannot be bracketed.
FitResult fit_weibull(const Rld& rld, const FitOptions& options = {});

/// Weibull fit with the shape held fixed (shape 1 reproduces fit_exponential).
FitResult fit_weibull_fixed_shape(const Rld& rld, double shape, const FitOptions& options = {});

class FitError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

/// Draws n independent run lengths ceil(X), X ~ model, censoring those above
/// `cutoff`. P(ceil(X) <= k) = F(k) at every whole k.
Rld sample_model(const ModelCdf& model, std::uint64_t n, std::uint64_t cutoff, std::uint64_t seed,
                 Provenance provenance = {});

}  // namespace rtd
