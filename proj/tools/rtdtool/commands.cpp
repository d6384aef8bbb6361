#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "manifest.hpp"
#include "rtd/analysis.hpp"
#include "rtd/cnf.hpp"
#include "rtd/error.hpp"
#include "rtd/fit.hpp"
#include "rtd/instancegen.hpp"
#include "rtd/io.hpp"
#include "rtd/random.hpp"
#include "rtd/rld.hpp"

namespace rtdtool {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kCurvePoints = 400;

json report_header(std::string_view command) {
  return {{"schema", std::string(rtd::kReportSchema)}, {"command", std::string(command)}};
}

// Reports go to --out when given, to stdout otherwise.
void emit(const json& report, const fs::path& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    rtd::write_file_atomically(out, text);
  }
}

json curve_json(const rtd::CurvePoints& points) {
  json out = json::array();
  for (const auto& [t, p] : points) out.push_back({t, p});
  return out;
}

// Writes one plot file and returns its name for the report.
json write_plot(const fs::path& dir, const std::string& name, const rtd::CurvePoints& points) {
  if (dir.empty()) return nullptr;
  fs::create_directories(dir);
  std::ostringstream out;
  rtd::write_plot_data(out, points);
  rtd::write_file_atomically(dir / (name + ".dat"), out.str());
  return name + ".dat";
}

double curve_end(const rtd::CdfSource& source, std::optional<double> t_max) {
  const double end = t_max.value_or(source.horizon());
  if (!std::isfinite(end) || !(end > 1.0)) throw rtd::ContractViolation("need a finite --t-max greater than 1");
  return end;
}

json rld_summary(const rtd::Rld& rld) {
  json j{{"instance", rld.provenance().instance},
         {"config", rld.provenance().config ? rtd::to_json(*rld.provenance().config) : json(nullptr)},
         {"base_seed", rld.provenance().base_seed},
         {"n_trials", rld.n_trials()},
         {"successes", rld.num_successes()},
         {"success_rate", rld.success_rate()},
         {"cutoff", rld.cutoff()},
         {"median", nullptr},
         {"mean_runtime_estimate", nullptr}};
  if (rld.success_rate() >= 0.5) j["median"] = rld.percentile(0.5);
  if (rld.num_successes() > 0) j["mean_runtime_estimate"] = rtd::estimate_mean_runtime(rld);
  return j;
}

rtd::Formula load_formula(const fs::path& path) {
  const std::string text = rtd::read_file(path);
  try {
    return rtd::parse_dimacs(text);
  } catch (const rtd::ParseError& e) {
    throw e.with_context(path.string());
  }
}

json tail_bounds(double mean, double sd, double p) {
  return {{"mean", mean},
          {"sd", sd},
          {"p", p},
          {"markov", rtd::markov_cutoff(mean, p)},
          {"tchebichev", rtd::tchebichev_cutoff(mean, sd, p)},
          {"exponential_median", mean * std::log(2.0)},
          {"exponential_quantile", rtd::exp_quantile(mean * std::log(2.0), p)}};
}

}  // namespace

void cmd_gen(const GenOptions& options) {
  const Manifest m = load_manifest(options.manifest);
  if (m.count == 0) throw rtd::ContractViolation("manifest has no test set (testset.count)");
  std::cerr << "generating " << m.count << " satisfiable instances (" << m.num_vars << " vars, ratio "
            << m.clause_ratio << ")\n";
  rtd::TestSetOptions topts;
  topts.dpll.node_limit = m.dpll_node_limit;
  topts.threads = m.threads;
  const rtd::TestSet set = rtd::build_test_set(m.num_vars, m.clause_ratio, m.count, m.testset_seed, topts);
  fs::create_directories(m.output_dir);
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    rtd::write_file_atomically(instance_path(m, i), rtd::to_dimacs(set.instances[i]));
  }
  json report = report_header("gen");
  report["testset"] = rtd::to_json(set);
  report["testset"]["clause_ratio"] = m.clause_ratio;
  emit(report, m.output_dir / "testset.json");
  std::cerr << "kept " << set.instances.size() << ", discarded " << set.discarded_count() << " ("
            << set.discarded_unsat << " unsatisfiable, " << set.discarded_budget << " over node budget)\n";
}

void cmd_run(const RunOptions& options) {
  const Manifest m = load_manifest(options.manifest);
  if (m.configs.empty()) throw rtd::ContractViolation("manifest lists no solver configs");
  const std::size_t count = instance_count(m);
  if (count == 0) throw rtd::ContractViolation("manifest has no instances (testset.count or instances)");
  fs::create_directories(m.output_dir / "rld");
  for (std::size_t i = 0; i < count; ++i) {
    const rtd::Formula formula = load_formula(instance_path(m, i));
    for (std::size_t c = 0; c < m.configs.size(); ++c) {
      const rtd::SolverConfig& config = m.configs[c];
      const std::uint64_t seed = rtd::derive_seed(rtd::derive_seed(m.base_seed, i), c);
      const rtd::Rld rld =
          rtd::collect(formula, config, m.n_trials, m.cutoff, seed, instance_id(m, i), {.threads = m.threads});
      rtd::write_file_atomically(rld_path(m, i, config), rtd::to_rld_csv(rld));
      std::cerr << "[" << i + 1 << "/" << count << "] " << instance_id(m, i) << " " << config.tag() << ": "
                << rld.num_successes() << "/" << rld.n_trials() << " solved\n";
    }
  }
}

void cmd_fit(const FitOptions& options) {
  const rtd::Rld rld = rtd::read_rld_csv(options.input);
  if (options.family != "exponential" && options.family != "weibull" && options.family != "both") {
    throw rtd::ContractViolation("--family must be exponential, weibull or both");
  }
  rtd::FitOptions fopts;
  fopts.min_successes = options.min_successes;
  fopts.gof.significance = options.significance;
  fopts.gof.left_truncation = options.left_truncation;

  json report = report_header("fit");
  report["input"] = options.input.string();
  report["rld"] = rld_summary(rld);
  const rtd::CdfSource source = rtd::CdfSource::empirical(rld);
  const rtd::CurvePoints raw = rtd::step_curve(source, static_cast<double>(rld.cutoff()));
  report["ecdf"] = curve_json(raw);
  json plots{{"raw", write_plot(options.plot_dir, "raw", raw)}};
  json fits = json::object();
  const double end = std::max(2.0, static_cast<double>(rld.cutoff()));
  auto add = [&](const std::string& name, const rtd::FitResult& fit) {
    fits[name] = rtd::to_json(fit);
    plots["fit_" + name] =
        write_plot(options.plot_dir, "fit_" + name, rtd::sampled_curve(rtd::CdfSource::model(fit.model), 1.0, end, kCurvePoints));
  };
  if (options.family != "weibull") add("exponential", rtd::fit_exponential(rld, fopts));
  if (options.family != "exponential") add("weibull", rtd::fit_weibull(rld, fopts));
  report["fits"] = fits;
  report["plots"] = plots;
  emit(report, options.out);
}

void cmd_analyze(const AnalyzeOptions& options) {
  if (options.inputs.empty() && !options.mean) {
    throw rtd::ContractViolation("analyze needs RLD files or --mean/--sd/--p");
  }
  json report = report_header("analyze");
  if (options.inputs.empty()) {
    if (!options.sd || !options.p) throw rtd::ContractViolation("--mean requires --sd and --p");
    report["tail_bounds"] = tail_bounds(*options.mean, *options.sd, *options.p);
    emit(report, options.out);
    return;
  }

  std::vector<rtd::Rld> rlds;
  json inputs = json::array();
  for (const fs::path& p : options.inputs) {
    rlds.push_back(rtd::read_rld_csv(p));
    inputs.push_back({{"path", p.string()}, {"rld", rld_summary(rlds.back())}});
  }
  report["inputs"] = inputs;
  const rtd::CdfSource source =
      rlds.size() == 1 ? rtd::CdfSource::empirical(rlds.front()) : rtd::CdfSource::averaged(rtd::average_rlds(rlds));
  const double end = curve_end(source, options.t_max);

  if (options.p) {
    const rtd::Rld& first = rlds.front();
    if (rlds.size() != 1) throw rtd::ContractViolation("tail bounds from data need exactly one RLD file");
    const double mean = options.mean.value_or(rtd::estimate_mean_runtime(first));
    const double sd = options.sd.value_or(rtd::success_stddev(first));
    report["tail_bounds"] = tail_bounds(mean, sd, *options.p);
  }

  const rtd::SearchGrid grid{.t_max = end};
  const rtd::CutoffReport expected = rtd::optimal_cutoff_expected_time(source, grid);
  const rtd::CutoffReport geometric = rtd::optimal_cutoff_geometric(source, grid);
  report["cutoff"] = {{"expected_time", rtd::to_json(expected)}, {"geometric", rtd::to_json(geometric)}};

  json plots{{"raw", write_plot(options.plot_dir, "raw", rtd::step_curve(source, end))}};
  if (rlds.size() == 1) {
    try {
      const rtd::SpeedupEvidence evidence = rtd::speedup_classification(rlds.front());
      report["speedup"] = rtd::to_json(evidence);
      plots["fit_weibull"] = write_plot(options.plot_dir, "fit_weibull",
                                        rtd::sampled_curve(rtd::CdfSource::model(evidence.weibull.model), 1.0, end, kCurvePoints));
      plots["fit_exponential"] = write_plot(
          options.plot_dir, "fit_exponential",
          rtd::sampled_curve(rtd::CdfSource::model(evidence.exponential.model), 1.0, end, kCurvePoints));
    } catch (const rtd::AnalysisError& e) {
      report["speedup"] = {{"error", e.what()}};
    }
  } else {
    report["hardness"] = rtd::to_json(rtd::hardness_distribution(rlds));
  }

  if (expected.t_star) {
    const rtd::CdfSource restarted = rtd::restart_transform(source, *expected.t_star);
    plots["restarted"] = write_plot(options.plot_dir, "restarted", rtd::sampled_curve(restarted, 1.0, end, kCurvePoints));
  }
  json parallel = json::array();
  for (unsigned p : options.processors) {
    const rtd::CdfSource par = rtd::parallel_transform(source, p);
    const std::string name = "parallel_p" + std::to_string(p);
    parallel.push_back({{"processors", p}, {"cdf_at_horizon", par(end)}, {"plot", write_plot(options.plot_dir, name, rtd::step_curve(par, end))}});
  }
  report["parallel"] = parallel;
  report["plots"] = plots;
  emit(report, options.out);
}

void cmd_compare(const CompareOptions& options) {
  const rtd::Rld ra = rtd::read_rld_csv(options.a);
  const rtd::Rld rb = rtd::read_rld_csv(options.b);
  const rtd::CdfSource a = rtd::CdfSource::empirical(ra);
  const rtd::CdfSource b = rtd::CdfSource::empirical(rb);
  const double horizon = std::min(a.horizon(), b.horizon());
  const double end = options.t_max.value_or(horizon);
  if (!(end > 1.0) || end > horizon) throw rtd::ContractViolation("--t-max must lie in (1, common horizon]");

  rtd::CompareOptions copts;
  copts.tolerance = options.tolerance;
  const rtd::Comparison plain = rtd::compare(a, b, copts);

  rtd::AnytimeOptions aopts;
  aopts.grid.t_max = end;
  aopts.grid.step = std::max(1.0, std::floor(end / 100000.0));
  aopts.compare.tolerance = options.tolerance;
  const rtd::AnytimeSchedule schedule = rtd::anytime_schedule(a, b, aopts);

  json report = report_header("compare");
  report["a"] = {{"path", options.a.string()}, {"rld", rld_summary(ra)}};
  report["b"] = {{"path", options.b.string()}, {"rld", rld_summary(rb)}};
  report["comparison"] = rtd::to_json(plain);
  report["anytime"] = rtd::to_json(schedule);
  json plots{{"a", write_plot(options.plot_dir, "a", rtd::step_curve(a, end))},
             {"b", write_plot(options.plot_dir, "b", rtd::step_curve(b, end))}};
  if (schedule.kind == rtd::AnytimeSchedule::Kind::SwitchAToB || schedule.kind == rtd::AnytimeSchedule::Kind::RunA) {
    plots["restarted_a"] =
        write_plot(options.plot_dir, "restarted_a", rtd::sampled_curve(schedule.restarted_a, 1.0, end, kCurvePoints));
    plots["composite"] =
        write_plot(options.plot_dir, "composite", rtd::sampled_curve(schedule.composite, 1.0, end, kCurvePoints));
  }
  report["plots"] = plots;
  emit(report, options.out);
}

void cmd_report(const ReportOptions& options) {
  const Manifest m = load_manifest(options.manifest);
  const std::size_t count = instance_count(m);
  if (m.configs.empty() || count == 0) throw rtd::ContractViolation("manifest lists no configs or instances");
  json report = report_header("report");
  report["n_trials"] = m.n_trials;
  report["cutoff"] = m.cutoff;
  report["base_seed"] = m.base_seed;
  report["rng"] = std::string(rtd::kRngAlgorithm);
  json per_config = json::array();
  const fs::path plot_dir = m.output_dir / "plots";
  for (const rtd::SolverConfig& config : m.configs) {
    std::vector<rtd::Rld> rlds;
    json instances = json::array();
    for (std::size_t i = 0; i < count; ++i) {
      rlds.push_back(rtd::read_rld_csv(rld_path(m, i, config)));
      json entry = rld_summary(rlds.back());
      for (const char* family : {"exponential", "weibull"}) {
        try {
          const rtd::FitResult fit = std::string(family) == "exponential" ? rtd::fit_exponential(rlds.back())
                                                                           : rtd::fit_weibull(rlds.back());
          entry[family] = rtd::to_json(fit);
        } catch (const rtd::AnalysisError& e) {
          entry[family] = {{"error", e.what()}};
        }
      }
      instances.push_back(entry);
    }
    json c{{"config", rtd::to_json(config)}, {"instances", instances}};
    try {
      c["hardness"] = rtd::to_json(rtd::hardness_distribution(rlds));
    } catch (const rtd::AnalysisError& e) {
      c["hardness"] = {{"error", e.what()}};
    }
    const rtd::CdfSource avg = rtd::CdfSource::averaged(rtd::average_rlds(rlds));
    try {
      const rtd::SearchGrid grid{.t_max = avg.horizon()};
      c["averaged"] = {{"expected_time", rtd::to_json(rtd::optimal_cutoff_expected_time(avg, grid))},
                       {"geometric", rtd::to_json(rtd::optimal_cutoff_geometric(avg, grid))}};
    } catch (const rtd::AnalysisError& e) {
      c["averaged"] = {{"error", e.what()}};
    }
    c["plot"] = write_plot(plot_dir, "averaged__" + config.tag(), rtd::step_curve(avg, avg.horizon()));
    per_config.push_back(c);
  }
  report["configs"] = per_config;
  emit(report, options.out.empty() ? m.output_dir / "report.json" : options.out);
}

void cmd_synth(const SynthOptions& options) {
  rtd::ModelCdf model;
  if (options.family == "exponential") model = rtd::ModelCdf::exponential(options.median);
  else if (options.family == "weibull") model = rtd::ModelCdf::weibull(options.median, options.shape);
  else throw rtd::ContractViolation("--family must be exponential or weibull");
  std::ostringstream id;
  id << "synthetic-" << rtd::to_string(model.family) << "-m" << rtd::format_number(model.median);
  if (model.family == rtd::Family::Weibull) id << "-a" << rtd::format_number(model.shape);
  const rtd::Rld rld = rtd::sample_model(model, options.n, options.cutoff, options.seed, {id.str(), std::nullopt, 0});
  const std::string text = rtd::to_rld_csv(rld);
  if (options.out.empty()) {
    std::cout << text;
  } else {
    if (options.out.has_parent_path()) fs::create_directories(options.out.parent_path());
    rtd::write_file_atomically(options.out, text);
  }
}

}  // namespace rtdtool
