#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rtdtool {

struct GenOptions {
  std::filesystem::path manifest;
};

struct RunOptions {
  std::filesystem::path manifest;
};

struct FitOptions {
  std::filesystem::path input;
  std::string family = "both";
  double significance = 0.05;
  std::uint64_t left_truncation = 0;
  std::size_t min_successes = 30;
  std::filesystem::path out;
  std::filesystem::path plot_dir;
};

struct AnalyzeOptions {
  std::vector<std::filesystem::path> inputs;
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<double> p;
  std::optional<double> t_max;
  std::vector<unsigned> processors{2, 4};
  std::filesystem::path out;
  std::filesystem::path plot_dir;
};

struct CompareOptions {
  std::filesystem::path a;
  std::filesystem::path b;
  std::optional<double> tolerance;
  std::optional<double> t_max;
  std::filesystem::path out;
  std::filesystem::path plot_dir;
};

struct ReportOptions {
  std::filesystem::path manifest;
  std::filesystem::path out;
};

struct SynthOptions {
  std::string family = "exponential";
  double median = 100.0;
  double shape = 1.0;
  std::uint64_t n = 1000;
  std::uint64_t cutoff = 1'000'000;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

void cmd_gen(const GenOptions& options);
void cmd_run(const RunOptions& options);
void cmd_fit(const FitOptions& options);
void cmd_analyze(const AnalyzeOptions& options);
void cmd_compare(const CompareOptions& options);
void cmd_report(const ReportOptions& options);
void cmd_synth(const SynthOptions& options);

}  // namespace rtdtool
