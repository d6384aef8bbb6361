#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtd/fit.hpp"
#include "rtd/rld.hpp"

namespace rtd {

inline constexpr double kInfiniteHorizon = std::numeric_limits<double>::infinity();

/// Any run-time distribution seen as t -> P(RT <= t): an empirical RLD, an
/// averaged RLD, a parametric model, an arbitrary function, or a transform
/// of one of these. Cheap to copy (shared immutable implementation).
class CdfSource {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double cdf(double t) const = 0;
    /// 1 - cdf(t); overridden where it can be computed without cancellation.
    virtual double survival(double t) const { return 1.0 - cdf(t); }
    /// Values beyond the horizon are not observed (the cdf is held constant).
    virtual double horizon() const { return kInfiniteHorizon; }
    /// True for piecewise-constant right-continuous cdfs.
    virtual bool is_step() const { return false; }
    /// For step sources: sorted points in [0, limit] where the cdf may jump.
    virtual std::vector<double> jumps(double /*limit*/) const { return {}; }
    /// Probability carried by one sample, for empirical sources.
    virtual std::optional<double> sample_mass() const { return std::nullopt; }
    virtual std::string describe() const = 0;
  };

  explicit CdfSource(std::shared_ptr<const Impl> impl);

  static CdfSource empirical(Rld rld);
  static CdfSource averaged(AveragedRld averaged);
  static CdfSource model(ModelCdf model);
  static CdfSource function(std::string name, std::function<double(double)> cdf,
                            double horizon = kInfiniteHorizon);

  double operator()(double t) const { return impl_->cdf(t); }
  double cdf(double t) const { return impl_->cdf(t); }
  double survival(double t) const { return impl_->survival(t); }
  CdfValue evaluate(double t) const { return {impl_->cdf(t), t > impl_->horizon()}; }
  double horizon() const { return impl_->horizon(); }
  bool is_step() const { return impl_->is_step(); }
  std::vector<double> jumps(double limit) const { return impl_->jumps(limit); }
  std::optional<double> sample_mass() const { return impl_->sample_mass(); }
  std::string describe() const { return impl_->describe(); }

  /// Integral of the survival function over [0, t]: the expected run time
  /// when every run is cut off at t. Exact for step sources, Gauss-Legendre
  /// on `step`-wide panels otherwise.
  double survival_integral(double t, double step = 1.0) const;

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace rtd
