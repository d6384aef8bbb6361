#include "rtd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rtd/error.hpp"
#include "rtd/random.hpp"

namespace rtd {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

namespace {

// JSON has no infinity; unbounded values are written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <typename T>
json optional_number(const std::optional<T>& x) {
  return x ? number(static_cast<double>(*x)) : json(nullptr);
}

}  // namespace

json to_json(const SolverConfig& config) {
  json j;
  j["algorithm"] = std::string(to_string(config.algorithm));
  if (config.walk_probability) j["walk_probability"] = *config.walk_probability;
  if (config.noise) j["noise"] = *config.noise;
  return j;
}

SolverConfig solver_config_from_json(const json& j) {
  if (!j.is_object() || !j.contains("algorithm") || !j["algorithm"].is_string()) {
    throw ContractViolation("solver config needs an \"algorithm\" string");
  }
  SolverConfig config;
  config.algorithm = algorithm_from_string(j["algorithm"].get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (key == "algorithm") continue;
    if (!value.is_number()) throw ContractViolation("solver parameter '" + key + "' must be a number");
    if (key == "walk_probability" || key == "wp") config.walk_probability = value.get<double>();
    else if (key == "noise") config.noise = value.get<double>();
    else throw ContractViolation("unknown solver parameter '" + key + "'");
  }
  config.validate();
  return config;
}

json to_json(const ModelCdf& model) {
  json j{{"family", std::string(to_string(model.family))}, {"median", model.median}};
  if (model.family == Family::Weibull) j["shape"] = model.shape;
  j["rate_base_e"] = model.family == Family::Exponential ? json(model.rate()) : json(nullptr);
  return j;
}

json to_json(const ChiSquareResult& r) {
  json bins = json::array();
  for (const ChiSquareBin& b : r.bins) {
    bins.push_back({{"lower", number(b.lower)}, {"upper", number(b.upper)}, {"observed", b.observed},
                    {"expected", b.expected}});
  }
  return {{"statistic", r.statistic}, {"dof", r.dof},   {"p_value", r.p_value},
          {"significance", r.significance}, {"pass", r.pass}, {"bins", bins}};
}

json to_json(const FitResult& fit) {
  json j{{"model", to_json(fit.model)},
         {"n_used", fit.n_used},
         {"n_censored", fit.n_censored},
         {"log_likelihood", number(fit.log_likelihood)},
         {"empirical_median", optional_number(fit.empirical_median)},
         {"chi2", fit.chi2 ? to_json(*fit.chi2) : json(nullptr)}};
  if (fit.shape_interval) {
    j["shape_interval"] = {{"lower", fit.shape_interval->lower},
                           {"upper", fit.shape_interval->upper},
                           {"level", fit.shape_interval->level}};
    j["shape_below_one"] = fit.shape_below_one();
    j["shape_above_one"] = fit.shape_above_one();
    j["shape_lr_p_value"] = optional_number(fit.shape_lr_p_value);
  }
  return j;
}

json to_json(const CutoffReport& r) {
  return {{"method", std::string(to_string(r.method))},
          {"t_star", optional_number(r.t_star)},
          {"m_star", optional_number(r.m_star)},
          {"expected_time", number(r.expected_time)},
          {"baseline_time", number(r.baseline_time)},
          {"baseline_horizon", number(r.baseline_horizon)},
          {"expected_speedup", number(r.expected_speedup)},
          {"degenerate", r.degenerate},
          {"objective_variation", number(r.objective_variation)}};
}

json to_json(const Comparison& c) {
  json crossings = json::array();
  for (const CrossoverInterval& x : c.crossovers) {
    crossings.push_back(
        {{"lower", x.lower}, {"upper", x.upper}, {"estimate", x.estimate}, {"sign_before", x.sign_before}});
  }
  return {{"verdict", std::string(to_string(c.verdict))},
          {"crossovers", crossings},
          {"tolerance", c.tolerance},
          {"num_probes", c.num_probes}};
}

json to_json(const AnytimeSchedule& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"description", s.description},
          {"plain_comparison", to_json(s.plain)},
          {"a_cutoff", s.a_cutoff.curve.empty() ? json(nullptr) : to_json(s.a_cutoff)},
          {"switch_point", optional_number(s.switch_point)}};
}

json to_json(const HardnessDistribution& h) {
  json medians = json::array();
  for (const InstanceHardness& m : h.medians) {
    medians.push_back({{"index", m.index}, {"instance", m.instance}, {"median", m.median}});
  }
  return {{"medians", medians}, {"unobserved", h.unobserved}, {"min", h.min},
          {"q1", h.q1},         {"median", h.median},         {"q3", h.q3},
          {"max", h.max},       {"spread_ratio", number(h.spread_ratio)}};
}

json to_json(const SpeedupEvidence& e) {
  return {{"classification", std::string(to_string(e.classification))},
          {"weibull", to_json(e.weibull)},
          {"exponential", to_json(e.exponential)}};
}

json to_json(const TestSet& set) {
  return {{"num_vars", set.descriptor.num_vars},
          {"num_clauses", set.descriptor.num_clauses},
          {"count", set.descriptor.count},
          {"base_seed", set.descriptor.base_seed},
          {"discarded_count", set.discarded_count()},
          {"discarded_unsat", set.discarded_unsat},
          {"discarded_budget", set.discarded_budget},
          {"candidate_indices", set.candidate_indices},
          {"rng", std::string(kRngAlgorithm)}};
}

void write_rld_csv(std::ostream& out, const Rld& rld) {
  const Provenance& p = rld.provenance();
  out << "# rld v1, n_trials=" << rld.n_trials() << ", cutoff=" << rld.cutoff() << ", instance=" << p.instance
      << ", config=" << (p.config ? to_json(*p.config).dump() : std::string("null")) << '\n';
  out << "# successes=" << rld.num_successes() << ", success_rate=" << format_number(rld.success_rate())
      << ", base_seed=" << p.base_seed << '\n';
  for (std::uint64_t x : rld.successes()) out << x << '\n';
}

std::string to_rld_csv(const Rld& rld) {
  std::ostringstream out;
  write_rld_csv(out, rld);
  return out.str();
}

namespace {

std::uint64_t parse_u64(std::string_view text, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(text) + "'", line);
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rld read_rld_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty RLD file", 0);
  ++line_no;
  constexpr std::string_view kPrefix = "# rld v1, ";
  std::string_view header = trim(line);
  if (header.substr(0, kPrefix.size()) != kPrefix) throw ParseError("missing '# rld v1' header", line_no);
  header.remove_prefix(kPrefix.size());

  std::optional<std::uint64_t> n_trials;
  std::optional<std::uint64_t> cutoff;
  Provenance provenance;
  while (!header.empty()) {
    const auto eq = header.find('=');
    if (eq == std::string_view::npos) throw ParseError("malformed header field", line_no);
    const std::string_view key = trim(header.substr(0, eq));
    header.remove_prefix(eq + 1);
    std::string_view value;
    if (key == "config") {
      value = header;
      header = {};
    } else {
      const auto comma = header.find(", ");
      value = header.substr(0, comma);
      header = comma == std::string_view::npos ? std::string_view{} : header.substr(comma + 2);
    }
    if (key == "n_trials") n_trials = parse_u64(value, line_no, "n_trials");
    else if (key == "cutoff") cutoff = parse_u64(value, line_no, "cutoff");
    else if (key == "instance") provenance.instance = std::string(value);
    else if (key == "config") {
      try {
        const json j = json::parse(value);
        if (!j.is_null()) provenance.config = solver_config_from_json(j);
      } catch (const std::exception& e) {
        throw ParseError(std::string("invalid config: ") + e.what(), line_no);
      }
    }
  }
  if (!n_trials || !cutoff) throw ParseError("header lacks n_trials or cutoff", line_no);
  if (*n_trials == 0) throw ParseError("n_trials must be positive", line_no);

  std::vector<std::uint64_t> successes;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      const auto pos = view.find("base_seed=");
      if (pos != std::string_view::npos) {
        std::string_view rest = view.substr(pos + 10);
        rest = rest.substr(0, rest.find(','));
        provenance.base_seed = parse_u64(trim(rest), line_no, "base_seed");
      }
      continue;
    }
    const std::uint64_t x = parse_u64(view, line_no, "run length");
    if (x > *cutoff) throw ParseError("run length " + std::to_string(x) + " exceeds cutoff", line_no);
    successes.push_back(x);
    if (successes.size() > *n_trials) throw ParseError("more run lengths than n_trials", line_no);
  }
  return Rld(std::move(successes), *n_trials, *cutoff, std::move(provenance));
}

Rld read_rld_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_rld_csv(in);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

CurvePoints step_curve(const CdfSource& source, double limit) {
  CurvePoints points{{0.0, source.cdf(0.0)}};
  for (double j : source.jumps(limit)) {
    if (j > 0.0) points.emplace_back(j, source.cdf(j));
  }
  const double end = std::min(limit, source.horizon());
  if (std::isfinite(end) && points.back().first < end) points.emplace_back(end, source.cdf(end));
  return points;
}

CurvePoints sampled_curve(const CdfSource& source, double t_min, double t_max, std::size_t points) {
  require(t_min > 0.0 && t_max > t_min && points >= 2, "invalid curve range");
  CurvePoints out;
  out.reserve(points);
  const double ratio = std::log(t_max / t_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = i + 1 == points ? t_max : t_min * std::exp(ratio * static_cast<double>(i));
    out.emplace_back(t, source.cdf(t));
  }
  return out;
}

void write_plot_data(std::ostream& out, const CurvePoints& points) {
  for (const auto& [t, p] : points) out << format_number(t) << ' ' << format_number(p) << '\n';
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rtd
