#include "rtd/cdf_source.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "rtd/error.hpp"

namespace rtd {

namespace {

std::vector<double> capped(std::span<const std::uint64_t> points, double limit) {
  std::vector<double> out;
  for (std::uint64_t p : points) {
    const auto x = static_cast<double>(p);
    if (x > limit) break;
    if (out.empty() || out.back() != x) out.push_back(x);
  }
  return out;
}

class EmpiricalImpl final : public CdfSource::Impl {
 public:
  explicit EmpiricalImpl(Rld rld) : rld_(std::move(rld)) {}
  double cdf(double t) const override { return rld_.cdf(t); }
  double horizon() const override { return static_cast<double>(rld_.cutoff()); }
  bool is_step() const override { return true; }
  std::vector<double> jumps(double limit) const override {
    return capped(rld_.successes(), std::min(limit, horizon()));
  }
  std::optional<double> sample_mass() const override { return 1.0 / static_cast<double>(rld_.n_trials()); }
  std::string describe() const override {
    const std::string& id = rld_.provenance().instance;
    return "empirical[" + (id.empty() ? std::string("rld") : id) + ", n=" + std::to_string(rld_.n_trials()) + "]";
  }

 private:
  Rld rld_;
};

class AveragedImpl final : public CdfSource::Impl {
 public:
  explicit AveragedImpl(AveragedRld avg) : avg_(std::move(avg)), points_(avg_.jump_points()) {}
  double cdf(double t) const override { return avg_.cdf(t); }
  double horizon() const override { return static_cast<double>(avg_.horizon()); }
  bool is_step() const override { return true; }
  std::vector<double> jumps(double limit) const override { return capped(points_, std::min(limit, horizon())); }
  std::optional<double> sample_mass() const override {
    std::uint64_t smallest = avg_.components().front().n_trials();
    for (const Rld& r : avg_.components()) smallest = std::min(smallest, r.n_trials());
    return 1.0 / (static_cast<double>(smallest) * static_cast<double>(avg_.components().size()));
  }
  std::string describe() const override {
    return "averaged[" + std::to_string(avg_.components().size()) + " rlds]";
  }

 private:
  AveragedRld avg_;
  std::vector<std::uint64_t> points_;
};

class ModelImpl final : public CdfSource::Impl {
 public:
  explicit ModelImpl(ModelCdf model) : model_(model) {}
  double cdf(double t) const override { return model_.cdf(t); }
  double survival(double t) const override { return model_.survival(t); }
  std::string describe() const override {
    std::ostringstream out;
    if (model_.family == Family::Exponential) out << "ed[" << model_.median << "]";
    else out << "wd[" << model_.median << ", " << model_.shape << "]";
    return out.str();
  }

 private:
  ModelCdf model_;
};

class FunctionImpl final : public CdfSource::Impl {
 public:
  FunctionImpl(std::string name, std::function<double(double)> f, double horizon)
      : name_(std::move(name)), f_(std::move(f)), horizon_(horizon) {}
  double cdf(double t) const override { return f_(std::min(t, horizon_)); }
  double horizon() const override { return horizon_; }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<double(double)> f_;
  double horizon_;
};

}  // namespace

CdfSource::CdfSource(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
  require(impl_ != nullptr, "null cdf source");
}

CdfSource CdfSource::empirical(Rld rld) { return CdfSource(std::make_shared<EmpiricalImpl>(std::move(rld))); }

CdfSource CdfSource::averaged(AveragedRld averaged) {
  return CdfSource(std::make_shared<AveragedImpl>(std::move(averaged)));
}

CdfSource CdfSource::model(ModelCdf model) { return CdfSource(std::make_shared<ModelImpl>(model)); }

CdfSource CdfSource::function(std::string name, std::function<double(double)> cdf, double horizon) {
  require(static_cast<bool>(cdf), "empty cdf function");
  return CdfSource(std::make_shared<FunctionImpl>(std::move(name), std::move(cdf), horizon));
}

double CdfSource::survival_integral(double t, double step) const {
  if (!(t > 0.0)) return 0.0;
  if (is_step()) {
    double integral = 0.0;
    double x = 0.0;
    double s = survival(0.0);
    for (double j : jumps(t)) {
      if (j <= 0.0) continue;
      integral += s * (j - x);
      x = j;
      s = survival(j);
    }
    return integral + s * (t - x);
  }
  require(step > 0.0, "integration step must be positive");
  using Rule = boost::math::quadrature::gauss<double, 15>;
  auto s = [this](double x) { return survival(x); };
  double integral = 0.0;
  double a = 0.0;
  while (a < t) {
    const double b = std::min(t, a + step);
    integral += Rule::integrate(s, a, b);
    a = b;
  }
  return integral;
}

}  // namespace rtd
