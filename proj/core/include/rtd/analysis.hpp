#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtd/cdf_source.hpp"
#include "rtd/fit.hpp"

namespace rtd {

/// Cutoff guaranteeing success probability p from the mean alone
/// (Markov inequality): mean / (1 - p).
double markov_cutoff(double mean, double p);

/// Cutoff guaranteeing success probability p from mean and standard
/// deviation (Tchebichev inequality): sd / sqrt(1 - p) + mean.
double tchebichev_cutoff(double mean, double sd, double p);

/// Candidate cutoffs for continuous sources are step, 2*step, ... <= t_max.
/// Step sources use their jump points (<= min(t_max, horizon)) instead.
struct SearchGrid {
  double t_max = 1e6;
  double step = 1.0;
  /// Relative spread below which the objective counts as flat (any cutoff
  /// is equivalent, no finite optimum).
  double flat_tolerance = 1e-9;
};

enum class CutoffMethod { Geometric, ExpectedTime };

std::string_view to_string(CutoffMethod method);

struct CutoffReport {
  CutoffMethod method = CutoffMethod::ExpectedTime;
  /// Absent when the objective is flat (degenerate).
  std::optional<double> t_star;
  /// Median of the steepest exponential touching the source (Geometric only).
  std::optional<double> m_star;
  /// Expected run time with restarts every t_star steps.
  double expected_time = 0.0;
  /// Expected run time without restarts, evaluated up to baseline_horizon.
  double baseline_time = 0.0;
  double baseline_horizon = 0.0;
  double expected_speedup = 1.0;
  bool degenerate = false;
  /// Relative spread (max - min) / min of the objective over the candidates.
  double objective_variation = 0.0;
  /// Objective at each candidate cutoff: m*(t) for Geometric, E(t) otherwise.
  std::vector<std::pair<double, double>> curve;
};

/// Expected run time when restarting every t steps:
/// E(t) = integral_0^t (1 - F) / F(t). At the cutoff of an empirical RLD
/// this equals estimate_mean_runtime.
double expected_time_with_restarts(const CdfSource& source, double t, double step = 1.0);

/// Smallest m such that ed[m] meets the source somewhere within the horizon:
/// m*(t) = t / -log2(1 - F(t)) minimized over the candidates.
CutoffReport optimal_cutoff_geometric(const CdfSource& source, const SearchGrid& grid);

/// Cutoff minimizing E(t) over the candidates.
CutoffReport optimal_cutoff_expected_time(const CdfSource& source, const SearchGrid& grid);

/// G(k*t_c + r) = 1 - (1 - F(t_c))^k (1 - F(r)), 0 <= r < t_c.
CdfSource restart_transform(const CdfSource& source, double t_c);

/// G(t) = 1 - (1 - F(t))^p: p independent runs in parallel.
CdfSource parallel_transform(const CdfSource& source, unsigned processors);

enum class SpeedupClass { Optimal, SubOptimal, SuperOptimal };

std::string_view to_string(SpeedupClass c);

struct SpeedupEvidence {
  SpeedupClass classification = SpeedupClass::Optimal;
  FitResult weibull;
  FitResult exponential;
};

/// Parallel-speedup class from the Weibull shape's confidence interval:
/// entirely below 1 (less steep than exponential) is super-optimal, entirely
/// above 1 sub-optimal, otherwise optimal.
SpeedupEvidence speedup_classification(const Rld& rld, const FitOptions& options = {});

enum class Verdict { ADominates, BDominates, Crossover, Indistinguishable };

std::string_view to_string(Verdict v);

struct CrossoverInterval {
  double lower = 0.0;
  double upper = 0.0;
  /// Linear interpolation of the zero of a - b between the bracketing probes.
  double estimate = 0.0;
  /// Sign of a - b just before the crossing (+1: a was ahead).
  int sign_before = 0;
};

struct Comparison {
  Verdict verdict = Verdict::Indistinguishable;
  std::vector<CrossoverInterval> crossovers;
  double tolerance = 0.0;
  std::size_t num_probes = 0;
};

struct CompareOptions {
  /// Explicit probe grid. When empty, the jump points of both (step)
  /// sources plus 0 and the common horizon are used.
  std::vector<double> probes;
  /// Equality tolerance; defaults to one sample mass of the coarser
  /// empirical source, or 1e-12 for parametric sources.
  std::optional<double> tolerance;
};

Comparison compare(const CdfSource& a, const CdfSource& b, const CompareOptions& options = {});

struct AnytimeOptions {
  SearchGrid grid;
  CompareOptions compare;
};

struct AnytimeSchedule {
  enum class Kind { SwitchAToB, RunA, RunB, Either };
  Kind kind = Kind::Either;
  /// Plain comparison of a and b without restarts.
  Comparison plain;
  /// Expected-time optimal cutoff used to restart a.
  CutoffReport a_cutoff;
  /// First probe at which b catches up with restarted a.
  std::optional<double> switch_point;
  CdfSource restarted_a;
  /// Restarted a before the switch point, b from the switch point on.
  CdfSource composite;
  std::string description;
};

std::string_view to_string(AnytimeSchedule::Kind kind);

AnytimeSchedule anytime_schedule(const CdfSource& a, const CdfSource& b, const AnytimeOptions& options = {});

/// Expected utility of the solve time: sum of u(t) dF(t) over [0, horizon].
/// Exact sum over the jumps of step sources, Stieltjes quadrature otherwise.
/// Runs unsolved by the horizon contribute nothing.
double expected_utility(const CdfSource& source, const std::function<double(double)>& utility, double horizon);

}  // namespace rtd
