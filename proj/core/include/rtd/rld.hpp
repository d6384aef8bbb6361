#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtd/sls.hpp"

namespace rtd {

struct Provenance {
  std::string instance;
  std::optional<SolverConfig> config;
  std::uint64_t base_seed = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// A cdf value together with whether it lies beyond the censoring horizon
/// (in which case it is the value at the horizon, not an extrapolation).
struct CdfValue {
  double probability = 0.0;
  bool censored = false;
};

/// Empirical run-length distribution: the sorted run lengths of the
/// successful trials out of n_trials, all measured with the same cutoff.
class Rld {
 public:
  Rld(std::vector<std::uint64_t> successes, std::uint64_t n_trials, std::uint64_t cutoff, Provenance provenance = {});

  static Rld from_runs(std::span<const RunRecord> runs, std::uint64_t cutoff, Provenance provenance = {});

  std::span<const std::uint64_t> successes() const { return successes_; }
  std::uint64_t n_trials() const { return n_trials_; }
  std::uint64_t cutoff() const { return cutoff_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t num_successes() const { return successes_.size(); }
  std::uint64_t num_censored() const { return n_trials_ - successes_.size(); }
  double success_rate() const { return static_cast<double>(successes_.size()) / static_cast<double>(n_trials_); }

  /// |{successes <= t}| / n_trials, frozen at the cutoff for t > cutoff.
  double cdf(double t) const { return evaluate(t).probability; }
  CdfValue evaluate(double t) const;

  /// Smallest observed run length t with cdf(t) >= q. Throws AnalysisError
  /// when q exceeds the success rate (the quantile was cut off).
  std::uint64_t percentile(double q) const;

  friend bool operator==(const Rld&, const Rld&) = default;

 private:
  std::vector<std::uint64_t> successes_;
  std::uint64_t n_trials_;
  std::uint64_t cutoff_;
  Provenance provenance_;
};

struct CollectOptions {
  unsigned threads = 0;
};

/// Runs n_trials seeded trials (trial i uses derive_seed(base_seed, i)).
Rld collect(const Formula& formula, const SolverConfig& config, std::uint64_t n_trials, std::uint64_t cutoff,
            std::uint64_t base_seed, std::string instance_id = {}, const CollectOptions& options = {});

/// Mean run time accounting for censored runs:
/// (1/k) * sum(successes) + ((n - k) / k) * cutoff.
double estimate_mean_runtime(const Rld& rld);

/// Mean and standard deviation (n - 1 denominator) of the successful runs.
double success_mean(const Rld& rld);
double success_stddev(const Rld& rld);

/// Equal-weight average of several RLDs (e.g. over a test set).
class AveragedRld {
 public:
  explicit AveragedRld(std::vector<Rld> components);

  const std::vector<Rld>& components() const { return components_; }
  /// Smallest component cutoff; values beyond it are flagged censored.
  std::uint64_t horizon() const { return horizon_; }
  bool mixed_cutoffs() const { return mixed_cutoffs_; }

  double cdf(double t) const { return evaluate(t).probability; }
  CdfValue evaluate(double t) const;

  /// Sorted distinct run lengths at which some component cdf jumps.
  std::vector<std::uint64_t> jump_points() const;

 private:
  std::vector<Rld> components_;
  std::uint64_t horizon_ = 0;
  bool mixed_cutoffs_ = false;
};

AveragedRld average_rlds(std::vector<Rld> rlds);

struct InstanceHardness {
  std::size_t index = 0;
  std::string instance;
  std::uint64_t median = 0;
};

/// Distribution of per-instance median run lengths. Quartiles use the same
/// nearest-rank rule as Rld::percentile.
struct HardnessDistribution {
  std::vector<InstanceHardness> medians;  // sorted by median
  std::vector<std::size_t> unobserved;    // indices with success rate < 0.5
  std::uint64_t min = 0;
  std::uint64_t q1 = 0;
  std::uint64_t median = 0;
  std::uint64_t q3 = 0;
  std::uint64_t max = 0;
  /// max / min; infinite when the easiest instance has median 0.
  double spread_ratio = 0.0;
};

HardnessDistribution hardness_distribution(std::span<const Rld> rlds);

}  // namespace rtd
