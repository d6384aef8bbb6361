#include "rtd/rld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rtd/detail/parallel.hpp"
#include "rtd/error.hpp"
#include "rtd/random.hpp"

namespace rtd {

Rld::Rld(std::vector<std::uint64_t> successes, std::uint64_t n_trials, std::uint64_t cutoff, Provenance provenance)
    : successes_(std::move(successes)), n_trials_(n_trials), cutoff_(cutoff), provenance_(std::move(provenance)) {
  require(n_trials_ >= 1, "an RLD needs at least one trial");
  require(successes_.size() <= n_trials_, "more successes than trials");
  std::sort(successes_.begin(), successes_.end());
  require(successes_.empty() || successes_.back() <= cutoff_, "run length exceeds cutoff");
}

Rld Rld::from_runs(std::span<const RunRecord> runs, std::uint64_t cutoff, Provenance provenance) {
  std::vector<std::uint64_t> successes;
  for (const RunRecord& r : runs) {
    if (r.success()) successes.push_back(r.flips);
  }
  return Rld(std::move(successes), runs.size(), cutoff, std::move(provenance));
}

CdfValue Rld::evaluate(double t) const {
  const bool censored = t > static_cast<double>(cutoff_);
  if (t < 0.0) return {0.0, false};
  const double clamped = std::min(t, static_cast<double>(cutoff_));
  const auto count = std::upper_bound(successes_.begin(), successes_.end(), clamped,
                                      [](double x, std::uint64_t s) { return x < static_cast<double>(s); }) -
                     successes_.begin();
  return {static_cast<double>(count) / static_cast<double>(n_trials_), censored};
}

std::uint64_t Rld::percentile(double q) const {
  require(q > 0.0 && q <= 1.0, "quantile level must lie in (0, 1]");
  const auto n = static_cast<double>(n_trials_);
  // Smallest count c with c / n >= q, using the same division as cdf().
  auto c = static_cast<std::uint64_t>(std::ceil(q * n));
  while (c > 0 && static_cast<double>(c - 1) / n >= q) --c;
  while (static_cast<double>(c) / n < q) ++c;
  if (c > successes_.size()) {
    throw AnalysisError("quantile not observed: level " + std::to_string(q) + " exceeds success rate " +
                        std::to_string(success_rate()) + " (distribution truncated by the cutoff)");
  }
  return successes_[c - 1];
}

Rld collect(const Formula& formula, const SolverConfig& config, std::uint64_t n_trials, std::uint64_t cutoff,
            std::uint64_t base_seed, std::string instance_id, const CollectOptions& options) {
  require(n_trials >= 1, "n_trials must be at least 1");
  config.validate();
  std::vector<RunRecord> runs(n_trials);
  detail::parallel_for(
      n_trials, [&](std::size_t i) { runs[i] = run(formula, config, cutoff, derive_seed(base_seed, i)); },
      options.threads);
  return Rld::from_runs(runs, cutoff, Provenance{std::move(instance_id), config, base_seed});
}

double estimate_mean_runtime(const Rld& rld) {
  const auto k = static_cast<double>(rld.num_successes());
  if (k == 0) throw AnalysisError("mean undefined, no successes");
  const double sum = std::accumulate(rld.successes().begin(), rld.successes().end(), 0.0,
                                     [](double acc, std::uint64_t x) { return acc + static_cast<double>(x); });
  const auto n = static_cast<double>(rld.n_trials());
  return sum / k + (n - k) / k * static_cast<double>(rld.cutoff());
}

double success_mean(const Rld& rld) {
  if (rld.num_successes() == 0) throw AnalysisError("mean undefined, no successes");
  double sum = 0.0;
  for (std::uint64_t x : rld.successes()) sum += static_cast<double>(x);
  return sum / static_cast<double>(rld.num_successes());
}

double success_stddev(const Rld& rld) {
  if (rld.num_successes() < 2) throw AnalysisError("standard deviation needs at least two successes");
  const double mean = success_mean(rld);
  double ss = 0.0;
  for (std::uint64_t x : rld.successes()) {
    const double d = static_cast<double>(x) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(rld.num_successes() - 1));
}

AveragedRld::AveragedRld(std::vector<Rld> components) : components_(std::move(components)) {
  require(!components_.empty(), "cannot average an empty list of RLDs");
  horizon_ = components_.front().cutoff();
  for (const Rld& r : components_) {
    if (r.cutoff() != components_.front().cutoff()) mixed_cutoffs_ = true;
    horizon_ = std::min(horizon_, r.cutoff());
  }
}

CdfValue AveragedRld::evaluate(double t) const {
  double sum = 0.0;
  for (const Rld& r : components_) sum += r.cdf(t);
  return {sum / static_cast<double>(components_.size()), t > static_cast<double>(horizon_)};
}

std::vector<std::uint64_t> AveragedRld::jump_points() const {
  std::vector<std::uint64_t> points;
  for (const Rld& r : components_) points.insert(points.end(), r.successes().begin(), r.successes().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

AveragedRld average_rlds(std::vector<Rld> rlds) { return AveragedRld(std::move(rlds)); }

HardnessDistribution hardness_distribution(std::span<const Rld> rlds) {
  HardnessDistribution out;
  for (std::size_t i = 0; i < rlds.size(); ++i) {
    if (rlds[i].success_rate() < 0.5) {
      out.unobserved.push_back(i);
      continue;
    }
    out.medians.push_back({i, rlds[i].provenance().instance, rlds[i].percentile(0.5)});
  }
  if (out.medians.empty()) throw AnalysisError("no instance has an observed median (all success rates < 0.5)");
  std::stable_sort(out.medians.begin(), out.medians.end(),
                   [](const InstanceHardness& a, const InstanceHardness& b) { return a.median < b.median; });
  const std::size_t k = out.medians.size();
  auto rank = [&](double q) {
    auto c = static_cast<std::size_t>(std::ceil(q * static_cast<double>(k)));
    return out.medians[std::clamp<std::size_t>(c, 1, k) - 1].median;
  };
  out.min = out.medians.front().median;
  out.max = out.medians.back().median;
  out.q1 = rank(0.25);
  out.median = rank(0.5);
  out.q3 = rank(0.75);
  out.spread_ratio = out.min == 0 ? (out.max == 0 ? 1.0 : std::numeric_limits<double>::infinity())
                                  : static_cast<double>(out.max) / static_cast<double>(out.min);
  return out;
}

}  // namespace rtd
