#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rtd/sls.hpp"

namespace rtdtool {

/// A declarative experiment: which test set to build, which solver
/// configurations to run on it, and where to put the results. Relative paths
/// are resolved against the manifest's directory.
struct Manifest {
  std::uint32_t num_vars = 0;
  double clause_ratio = 4.3;
  std::uint32_t count = 0;
  std::uint64_t testset_seed = 0;
  std::uint64_t dpll_node_limit = 50'000'000;

  std::vector<rtd::SolverConfig> configs;
  std::uint64_t n_trials = 1000;
  std::uint64_t cutoff = 1'000'000;
  std::uint64_t base_seed = 0;
  std::filesystem::path output_dir;
  /// Explicit instance files; when empty the generated test set is used.
  std::vector<std::filesystem::path> instances;
  unsigned threads = 0;
};

/// Throws rtd::ParseError for malformed JSON, rtd::ContractViolation for
/// values outside their domain, rtd::IoError if the file cannot be read.
Manifest load_manifest(const std::filesystem::path& path);

std::filesystem::path instance_path(const Manifest& m, std::size_t index);
std::string instance_id(const Manifest& m, std::size_t index);
std::size_t instance_count(const Manifest& m);
std::filesystem::path rld_path(const Manifest& m, std::size_t instance, const rtd::SolverConfig& config);

}  // namespace rtdtool
