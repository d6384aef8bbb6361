#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtd/analysis.hpp"
#include "rtd/instancegen.hpp"

namespace rtd {

inline constexpr std::string_view kReportSchema = "rtd-report/1";

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

nlohmann::json to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelCdf& model);
nlohmann::json to_json(const ChiSquareResult& result);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const CutoffReport& report);
nlohmann::json to_json(const Comparison& comparison);
nlohmann::json to_json(const AnytimeSchedule& schedule);
nlohmann::json to_json(const HardnessDistribution& hardness);
nlohmann::json to_json(const SpeedupEvidence& evidence);
nlohmann::json to_json(const TestSet& set);

/// RLD file: a `# rld v1, n_trials=<n>, cutoff=<c>, instance=<id>, config=<json>`
/// header, a `# successes=<k>, success_rate=<r>, base_seed=<s>` line, then
/// one successful run length per line.
void write_rld_csv(std::ostream& out, const Rld& rld);
std::string to_rld_csv(const Rld& rld);
Rld read_rld_csv(std::istream& in);
Rld read_rld_csv(const std::filesystem::path& path);

using CurvePoints = std::vector<std::pair<double, double>>;

/// (t, cdf) at 0 and at every jump of a step source up to `limit`.
CurvePoints step_curve(const CdfSource& source, double limit);
/// (t, cdf) on `points` log-spaced abscissae in [t_min, t_max].
CurvePoints sampled_curve(const CdfSource& source, double t_min, double t_max, std::size_t points);

/// Two whitespace-separated columns, one point per line.
void write_plot_data(std::ostream& out, const CurvePoints& points);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace rtd
