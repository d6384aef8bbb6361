#include "rtd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "rtd/error.hpp"

namespace rtd {

namespace {

// 1 - p for a probability given in decimal: 1 - 0.99 is 0.010000000000000009
// in binary, which would turn the textbook 10000 into 9999.999999999991.
// Rounding the complement to 15 significant digits recovers the decimal value.
double decimal_complement(double p) {
  const double q = 1.0 - p;
  if (q < 1e-290) return q;
  const double scale = std::pow(10.0, 14 - std::floor(std::log10(q)));
  return std::round(q * scale) / scale;
}

}  // namespace

double markov_cutoff(double mean, double p) {
  require(p >= 0.0 && p < 1.0, "probability must lie in [0, 1)");
  return mean / decimal_complement(p);
}

double tchebichev_cutoff(double mean, double sd, double p) {
  require(p >= 0.0 && p < 1.0, "probability must lie in [0, 1)");
  require(sd >= 0.0 && std::isfinite(sd), "standard deviation must be finite and nonnegative");
  return sd / std::sqrt(decimal_complement(p)) + mean;
}

std::string_view to_string(CutoffMethod method) {
  return method == CutoffMethod::Geometric ? "geometric" : "expected_time";
}

std::string_view to_string(SpeedupClass c) {
  switch (c) {
    case SpeedupClass::Optimal: return "optimal";
    case SpeedupClass::SubOptimal: return "sub_optimal";
    case SpeedupClass::SuperOptimal: return "super_optimal";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ADominates: return "a_dominates";
    case Verdict::BDominates: return "b_dominates";
    case Verdict::Crossover: return "crossover";
    case Verdict::Indistinguishable: return "indistinguishable";
  }
  return "unknown";
}

std::string_view to_string(AnytimeSchedule::Kind kind) {
  switch (kind) {
    case AnytimeSchedule::Kind::SwitchAToB: return "switch_a_to_b";
    case AnytimeSchedule::Kind::RunA: return "run_a";
    case AnytimeSchedule::Kind::RunB: return "run_b";
    case AnytimeSchedule::Kind::Either: return "either";
  }
  return "unknown";
}

namespace {

double search_limit(const CdfSource& source, const SearchGrid& grid) {
  require(grid.t_max > 0.0 && std::isfinite(grid.t_max), "grid t_max must be positive and finite");
  require(grid.step > 0.0, "grid step must be positive");
  return std::min(grid.t_max, source.horizon());
}

std::vector<double> candidate_cutoffs(const CdfSource& source, const SearchGrid& grid) {
  const double limit = search_limit(source, grid);
  std::vector<double> out;
  if (source.is_step()) {
    for (double j : source.jumps(limit)) {
      if (j > 0.0) out.push_back(j);
    }
  } else {
    const auto count = static_cast<std::uint64_t>(std::floor(limit / grid.step));
    out.reserve(count + 1);
    for (std::uint64_t i = 1; i <= count; ++i) out.push_back(static_cast<double>(i) * grid.step);
  }
  if (out.empty() || out.back() < limit) out.push_back(limit);
  return out;
}

// Cumulative integral of the survival function at each candidate.
std::vector<double> cumulative_survival(const CdfSource& source, const std::vector<double>& ts, double step) {
  std::vector<double> out(ts.size());
  double integral = 0.0;
  double prev = 0.0;
  if (source.is_step()) {
    double s = source.survival(0.0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      integral += s * (ts[i] - prev);
      prev = ts[i];
      s = source.survival(ts[i]);
      out[i] = integral;
    }
    return out;
  }
  using Rule = boost::math::quadrature::gauss<double, 15>;
  auto s = [&source](double x) { return source.survival(x); };
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double a = prev;
    while (a < ts[i]) {
      const double b = std::min(ts[i], a + step);
      integral += Rule::integrate(s, a, b);
      a = b;
    }
    prev = ts[i];
    out[i] = integral;
  }
  return out;
}

double relative_spread(const std::vector<std::pair<double, double>>& curve) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [t, v] : curve) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return lo > 0.0 ? (hi - lo) / lo : std::numeric_limits<double>::infinity();
}

void fill_baseline(CutoffReport& report, const CdfSource& source, const SearchGrid& grid) {
  report.baseline_horizon = search_limit(source, grid);
  report.baseline_time = expected_time_with_restarts(source, report.baseline_horizon, grid.step);
  report.expected_speedup = report.baseline_time / report.expected_time;
}

}  // namespace

double expected_time_with_restarts(const CdfSource& source, double t, double step) {
  require(t > 0.0, "cutoff must be positive");
  const double f = source.cdf(t);
  if (!(f > 0.0)) throw AnalysisError("restart never succeeds: F(t) = 0");
  return source.survival_integral(t, step) / f;
}

CutoffReport optimal_cutoff_geometric(const CdfSource& source, const SearchGrid& grid) {
  CutoffReport report;
  report.method = CutoffMethod::Geometric;
  for (double t : candidate_cutoffs(source, grid)) {
    const double s = source.survival(t);
    // F(t) = 1 says nothing about the tail; F(t) = 0 gives no contact.
    if (!(s > 0.0) || !(s < 1.0)) continue;
    report.curve.emplace_back(t, t / -std::log2(s));
  }
  if (report.curve.empty()) throw AnalysisError("no solutions observed within the search horizon");

  auto best = report.curve.front();
  for (const auto& point : report.curve) {
    if (point.second < best.second) best = point;
  }
  report.m_star = best.second;
  report.objective_variation = relative_spread(report.curve);
  report.degenerate = report.objective_variation < grid.flat_tolerance;
  if (report.degenerate) {
    report.expected_time = best.second / std::numbers::ln2;
  } else {
    report.t_star = best.first;
    report.expected_time = expected_time_with_restarts(source, best.first, grid.step);
  }
  fill_baseline(report, source, grid);
  return report;
}

CutoffReport optimal_cutoff_expected_time(const CdfSource& source, const SearchGrid& grid) {
  CutoffReport report;
  report.method = CutoffMethod::ExpectedTime;
  const std::vector<double> ts = candidate_cutoffs(source, grid);
  const std::vector<double> integrals = cumulative_survival(source, ts, grid.step);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double f = source.cdf(ts[i]);
    if (f > 0.0) report.curve.emplace_back(ts[i], integrals[i] / f);
  }
  if (report.curve.empty()) throw AnalysisError("no solutions observed within the search horizon");

  auto best = report.curve.front();
  for (const auto& point : report.curve) {
    if (point.second < best.second) best = point;
  }
  report.objective_variation = relative_spread(report.curve);
  report.degenerate = report.objective_variation < grid.flat_tolerance;
  report.expected_time = best.second;
  if (!report.degenerate) report.t_star = best.first;
  report.baseline_horizon = ts.back();
  report.baseline_time = source.cdf(ts.back()) > 0.0 ? integrals.back() / source.cdf(ts.back())
                                                     : std::numeric_limits<double>::infinity();
  report.expected_speedup = report.baseline_time / report.expected_time;
  return report;
}

namespace {

class RestartImpl final : public CdfSource::Impl {
 public:
  RestartImpl(CdfSource source, double t_c)
      : source_(std::move(source)), t_c_(t_c), fail_(source_.survival(t_c)) {}

  double cdf(double t) const override { return 1.0 - survival(t); }
  double survival(double t) const override {
    if (t < 0.0) return 1.0;
    double k = std::floor(t / t_c_);
    double r = t - k * t_c_;
    if (r >= t_c_) {
      k += 1.0;
      r -= t_c_;
    }
    if (r < 0.0) r = 0.0;
    return std::pow(fail_, k) * source_.survival(r);
  }
  bool is_step() const override { return source_.is_step(); }
  std::vector<double> jumps(double limit) const override {
    if (!source_.is_step()) return {};
    std::vector<double> inner;
    for (double j : source_.jumps(t_c_)) {
      if (j < t_c_) inner.push_back(j);
    }
    std::vector<double> out;
    for (double base = 0.0; base <= limit; base += t_c_) {
      if (base > 0.0) out.push_back(base);
      for (double j : inner) {
        if (base + j > limit) break;
        if (j > 0.0 || base == 0.0) out.push_back(base + j);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::optional<double> sample_mass() const override { return source_.sample_mass(); }
  std::string describe() const override {
    std::ostringstream out;
    out << "restart[" << source_.describe() << ", t_c=" << t_c_ << "]";
    return out.str();
  }

 private:
  CdfSource source_;
  double t_c_;
  double fail_;
};

class ParallelImpl final : public CdfSource::Impl {
 public:
  ParallelImpl(CdfSource source, unsigned p) : source_(std::move(source)), p_(p) {}
  double cdf(double t) const override { return 1.0 - survival(t); }
  double survival(double t) const override { return std::pow(source_.survival(t), static_cast<double>(p_)); }
  double horizon() const override { return source_.horizon(); }
  bool is_step() const override { return source_.is_step(); }
  std::vector<double> jumps(double limit) const override { return source_.jumps(limit); }
  std::optional<double> sample_mass() const override { return source_.sample_mass(); }
  std::string describe() const override {
    return "parallel[" + source_.describe() + ", p=" + std::to_string(p_) + "]";
  }

 private:
  CdfSource source_;
  unsigned p_;
};

}  // namespace

CdfSource restart_transform(const CdfSource& source, double t_c) {
  require(t_c >= 1.0, "restart cutoff must be at least one step");
  require(t_c <= source.horizon(), "restart cutoff lies beyond the source's censoring horizon");
  if (!(source.cdf(t_c) > 0.0)) throw AnalysisError("restart never succeeds: F(t_c) = 0");
  return CdfSource(std::make_shared<RestartImpl>(source, t_c));
}

CdfSource parallel_transform(const CdfSource& source, unsigned processors) {
  require(processors >= 1, "processor count must be at least 1");
  if (processors == 1) return source;
  return CdfSource(std::make_shared<ParallelImpl>(source, processors));
}

SpeedupEvidence speedup_classification(const Rld& rld, const FitOptions& options) {
  SpeedupEvidence evidence{SpeedupClass::Optimal, fit_weibull(rld, options), fit_exponential(rld, options)};
  if (evidence.weibull.shape_below_one()) evidence.classification = SpeedupClass::SuperOptimal;
  else if (evidence.weibull.shape_above_one()) evidence.classification = SpeedupClass::SubOptimal;
  return evidence;
}

namespace {

std::vector<double> default_probes(const CdfSource& a, const CdfSource& b, double horizon) {
  std::vector<double> probes{0.0};
  for (const CdfSource* s : {&a, &b}) {
    if (!s->is_step()) continue;
    const auto j = s->jumps(horizon);
    probes.insert(probes.end(), j.begin(), j.end());
  }
  probes.push_back(horizon);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

double default_tolerance(const CdfSource& a, const CdfSource& b) {
  double tol = 0.0;
  for (const CdfSource* s : {&a, &b}) {
    if (auto mass = s->sample_mass()) tol = std::max(tol, *mass);
  }
  return tol > 0.0 ? tol : 1e-12;
}

}  // namespace

Comparison compare(const CdfSource& a, const CdfSource& b, const CompareOptions& options) {
  const double horizon = std::min(a.horizon(), b.horizon());
  std::vector<double> probes;
  if (!options.probes.empty()) {
    for (double t : options.probes) {
      if (t <= horizon) probes.push_back(t);
    }
    std::sort(probes.begin(), probes.end());
  } else if (std::isfinite(horizon) && (a.is_step() || b.is_step())) {
    probes = default_probes(a, b, horizon);
  }
  require(!probes.empty(), "empty probe grid");

  Comparison result;
  result.tolerance = options.tolerance.value_or(default_tolerance(a, b));
  result.num_probes = probes.size();
  bool a_ahead = false;
  bool b_ahead = false;
  int last_sign = 0;
  double last_t = 0.0;
  double last_diff = 0.0;
  for (double t : probes) {
    const double d = a(t) - b(t);
    const int sign = d > result.tolerance ? 1 : (d < -result.tolerance ? -1 : 0);
    if (sign == 0) continue;
    (sign > 0 ? a_ahead : b_ahead) = true;
    if (last_sign != 0 && sign != last_sign) {
      const double estimate = last_t + (t - last_t) * last_diff / (last_diff - d);
      result.crossovers.push_back({last_t, t, estimate, last_sign});
    }
    last_sign = sign;
    last_t = t;
    last_diff = d;
  }
  if (a_ahead && b_ahead) result.verdict = Verdict::Crossover;
  else if (a_ahead) result.verdict = Verdict::ADominates;
  else if (b_ahead) result.verdict = Verdict::BDominates;
  else result.verdict = Verdict::Indistinguishable;
  return result;
}

namespace {

std::vector<double> grid_probes(const CdfSource& a, const CdfSource& b, const SearchGrid& grid) {
  require(grid.t_max > 0.0 && grid.step > 0.0, "invalid search grid");
  std::vector<double> probes{0.0};
  const auto count = static_cast<std::uint64_t>(std::floor(grid.t_max / grid.step));
  for (std::uint64_t i = 1; i <= count; ++i) probes.push_back(static_cast<double>(i) * grid.step);
  for (const CdfSource* s : {&a, &b}) {
    if (!s->is_step()) continue;
    const auto j = s->jumps(std::min(grid.t_max, s->horizon()));
    probes.insert(probes.end(), j.begin(), j.end());
  }
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

std::string format_schedule(const AnytimeSchedule& s, const CdfSource& a, const CdfSource& b) {
  std::ostringstream out;
  const double t_c = s.a_cutoff.t_star.value_or(0.0);
  switch (s.kind) {
    case AnytimeSchedule::Kind::SwitchAToB:
      out << "run " << a.describe() << " restarted every " << t_c << " steps until " << *s.switch_point
          << " steps, then run " << b.describe();
      break;
    case AnytimeSchedule::Kind::RunA:
      out << "run " << a.describe();
      if (s.a_cutoff.t_star) out << " restarted every " << t_c << " steps";
      out << " (it dominates " << b.describe() << ")";
      break;
    case AnytimeSchedule::Kind::RunB: out << "run " << b.describe() << " (it dominates " << a.describe() << ")"; break;
    case AnytimeSchedule::Kind::Either: out << "run either (indistinguishable)"; break;
  }
  return out.str();
}

}  // namespace

AnytimeSchedule anytime_schedule(const CdfSource& a, const CdfSource& b, const AnytimeOptions& options) {
  CompareOptions copts = options.compare;
  if (copts.probes.empty()) copts.probes = grid_probes(a, b, options.grid);

  AnytimeSchedule schedule{AnytimeSchedule::Kind::Either, compare(a, b, copts), {}, std::nullopt, a, a, {}};
  switch (schedule.plain.verdict) {
    case Verdict::Indistinguishable:
      schedule.kind = AnytimeSchedule::Kind::Either;
      break;
    case Verdict::ADominates:
      schedule.kind = AnytimeSchedule::Kind::RunA;
      break;
    case Verdict::BDominates:
      schedule.kind = AnytimeSchedule::Kind::RunB;
      schedule.composite = b;
      break;
    case Verdict::Crossover: {
      schedule.a_cutoff = optimal_cutoff_expected_time(a, options.grid);
      if (schedule.a_cutoff.t_star) schedule.restarted_a = restart_transform(a, *schedule.a_cutoff.t_star);
      const CdfSource& ra = schedule.restarted_a;
      const double tol = copts.tolerance.value_or(schedule.plain.tolerance);
      bool a_led = false;
      for (double t : copts.probes) {
        const double d = ra(t) - b(t);
        if (!a_led) {
          a_led = d > tol;
          continue;
        }
        if (d <= 0.0) {
          schedule.switch_point = t;
          break;
        }
      }
      if (!a_led) {
        schedule.kind = AnytimeSchedule::Kind::RunB;
        schedule.composite = b;
      } else if (!schedule.switch_point) {
        schedule.kind = AnytimeSchedule::Kind::RunA;
        schedule.composite = ra;
      } else {
        schedule.kind = AnytimeSchedule::Kind::SwitchAToB;
        const double s3 = *schedule.switch_point;
        schedule.composite = CdfSource::function(
            "anytime[" + ra.describe() + " | " + b.describe() + "]",
            [ra, b, s3](double t) { return t < s3 ? ra(t) : b(t); }, std::min(ra.horizon(), b.horizon()));
      }
      break;
    }
  }
  schedule.description = format_schedule(schedule, a, b);
  return schedule;
}

double expected_utility(const CdfSource& source, const std::function<double(double)>& utility, double horizon) {
  require(horizon > 0.0 && std::isfinite(horizon), "utility horizon must be positive and finite");
  require(static_cast<bool>(utility), "empty utility function");
  if (source.is_step()) {
    const double limit = std::min(horizon, source.horizon());
    double total = 0.0;
    double prev = 0.0;
    for (double j : source.jumps(limit)) {
      const double f = source.cdf(j);
      total += utility(j) * (f - prev);
      prev = f;
    }
    return total;
  }
  // Stieltjes sums with trapezoidal utility weights on 2^15 and 2^16
  // panels, combined by Richardson extrapolation.
  auto stieltjes = [&](std::size_t panels) {
    const double h = horizon / static_cast<double>(panels);
    double total = 0.0;
    double f_prev = source.cdf(0.0);
    double u_prev = utility(0.0);
    for (std::size_t i = 1; i <= panels; ++i) {
      const double t = i == panels ? horizon : static_cast<double>(i) * h;
      const double f = source.cdf(t);
      const double u = utility(t);
      total += 0.5 * (u + u_prev) * (f - f_prev);
      f_prev = f;
      u_prev = u;
    }
    return total;
  };
  const double coarse = stieltjes(std::size_t{1} << 15);
  const double fine = stieltjes(std::size_t{1} << 16);
  return (4.0 * fine - coarse) / 3.0 + utility(0.0) * source.cdf(0.0);
}

}  // namespace rtd
