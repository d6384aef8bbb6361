#include "manifest.hpp"

#include <nlohmann/json.hpp>

#include "rtd/error.hpp"
#include "rtd/io.hpp"

namespace rtdtool {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw rtd::ContractViolation(std::string("manifest field '") + key + "' has the wrong type");
  }
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  const std::string text = rtd::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw rtd::ParseError(path.string() + ": " + e.what(), 0);
  }
  if (!j.is_object()) throw rtd::ParseError(path.string() + ": manifest must be a JSON object", 0);

  Manifest m;
  const std::filesystem::path base = path.parent_path();
  if (j.contains("testset")) {
    const json& t = j["testset"];
    m.num_vars = get_or<std::uint32_t>(t, "num_vars", 0);
    m.clause_ratio = get_or<double>(t, "clause_ratio", m.clause_ratio);
    m.count = get_or<std::uint32_t>(t, "count", 0);
    m.testset_seed = get_or<std::uint64_t>(t, "base_seed", 0);
    m.dpll_node_limit = get_or<std::uint64_t>(t, "dpll_node_limit", m.dpll_node_limit);
    if (m.count == 0) throw rtd::ContractViolation("testset.count must be at least 1");
    if (m.num_vars < 3) throw rtd::ContractViolation("testset.num_vars must be at least 3");
    if (!(m.clause_ratio > 0.0)) throw rtd::ContractViolation("testset.clause_ratio must be positive");
  }
  if (j.contains("configs")) {
    if (!j["configs"].is_array()) throw rtd::ContractViolation("manifest field 'configs' must be an array");
    for (const json& c : j["configs"]) m.configs.push_back(rtd::solver_config_from_json(c));
  }
  m.n_trials = get_or<std::uint64_t>(j, "n_trials", m.n_trials);
  m.cutoff = get_or<std::uint64_t>(j, "cutoff", m.cutoff);
  m.base_seed = get_or<std::uint64_t>(j, "base_seed", m.base_seed);
  m.threads = get_or<unsigned>(j, "threads", 0);
  if (m.n_trials == 0) throw rtd::ContractViolation("n_trials must be at least 1");
  if (m.cutoff == 0) throw rtd::ContractViolation("cutoff must be at least 1");

  const auto out = get_or<std::string>(j, "output_dir", "");
  if (out.empty()) throw rtd::ContractViolation("manifest needs an 'output_dir'");
  m.output_dir = base / out;
  if (j.contains("instances")) {
    for (const json& p : j["instances"]) {
      if (!p.is_string()) throw rtd::ContractViolation("manifest 'instances' must list file paths");
      m.instances.push_back(base / p.get<std::string>());
    }
  }
  return m;
}

std::size_t instance_count(const Manifest& m) { return m.instances.empty() ? m.count : m.instances.size(); }

std::filesystem::path instance_path(const Manifest& m, std::size_t index) {
  if (!m.instances.empty()) return m.instances.at(index);
  return m.output_dir / ("inst_" + std::to_string(index) + ".cnf");
}

std::string instance_id(const Manifest& m, std::size_t index) { return instance_path(m, index).stem().string(); }

std::filesystem::path rld_path(const Manifest& m, std::size_t instance, const rtd::SolverConfig& config) {
  return m.output_dir / "rld" / (instance_id(m, instance) + "__" + config.tag() + ".csv");
}

}  // namespace rtdtool
