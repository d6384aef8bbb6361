#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rtd/error.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kAnalysis = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run-length distribution toolkit for stochastic local search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rtdtool 0.1.0");

  rtdtool::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Build a satisfiable Random-3-SAT test set from a manifest");
  gen_cmd->add_option("manifest", gen.manifest, "Experiment manifest (JSON)")->required();

  rtdtool::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Measure one RLD per (instance, config) of a manifest");
  run_cmd->add_option("manifest", run.manifest, "Experiment manifest (JSON)")->required();

  rtdtool::FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit exponential/Weibull models to an RLD file");
  fit_cmd->add_option("input", fit.input, "RLD CSV file")->required();
  fit_cmd->add_option("--family", fit.family, "exponential, weibull or both")->capture_default_str();
  fit_cmd->add_option("--significance", fit.significance, "Chi-square significance level")->capture_default_str();
  fit_cmd->add_option("--left-truncation", fit.left_truncation, "Lump run lengths up to this value into one bin");
  fit_cmd->add_option("--min-successes", fit.min_successes, "Minimum successes for fitting")->capture_default_str();
  fit_cmd->add_option("-o,--out", fit.out, "Report file (default: stdout)");
  fit_cmd->add_option("--plot-dir", fit.plot_dir, "Directory for two-column plot data");

  rtdtool::AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Cutoffs, restarts, parallel speedup and tail bounds");
  analyze_cmd->add_option("inputs", analyze.inputs, "RLD CSV files (several are averaged)");
  analyze_cmd->add_option("--mean", analyze.mean, "Mean run time for tail bounds");
  analyze_cmd->add_option("--sd", analyze.sd, "Standard deviation for tail bounds");
  analyze_cmd->add_option("--p", analyze.p, "Target success probability for tail bounds");
  analyze_cmd->add_option("--t-max", analyze.t_max, "Search horizon (default: censoring horizon)");
  analyze_cmd->add_option("--processors", analyze.processors, "Processor counts for the parallel transform");
  analyze_cmd->add_option("-o,--out", analyze.out, "Report file (default: stdout)");
  analyze_cmd->add_option("--plot-dir", analyze.plot_dir, "Directory for two-column plot data");

  rtdtool::CompareOptions cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Dominance, crossover and anytime schedule of two RLDs");
  compare_cmd->add_option("a", cmp.a, "First RLD CSV")->required();
  compare_cmd->add_option("b", cmp.b, "Second RLD CSV")->required();
  compare_cmd->add_option("--tolerance", cmp.tolerance, "Equality tolerance (default: one sample mass)");
  compare_cmd->add_option("--t-max", cmp.t_max, "Probe horizon (default: common censoring horizon)");
  compare_cmd->add_option("-o,--out", cmp.out, "Report file (default: stdout)");
  compare_cmd->add_option("--plot-dir", cmp.plot_dir, "Directory for two-column plot data");

  rtdtool::ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Fit and summarize every RLD produced by a manifest");
  report_cmd->add_option("manifest", report.manifest, "Experiment manifest (JSON)")->required();
  report_cmd->add_option("-o,--out", report.out, "Report file (default: <output_dir>/report.json)");

  rtdtool::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write an RLD file sampled from a parametric model");
  synth_cmd->add_option("--family", synth.family, "exponential or weibull")->capture_default_str();
  synth_cmd->add_option("--median", synth.median, "Median m")->capture_default_str();
  synth_cmd->add_option("--shape", synth.shape, "Weibull shape")->capture_default_str();
  synth_cmd->add_option("-n,--trials", synth.n, "Number of draws")->capture_default_str();
  synth_cmd->add_option("--cutoff", synth.cutoff, "Censoring cutoff")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("-o,--out", synth.out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) rtdtool::cmd_gen(gen);
    else if (*run_cmd) rtdtool::cmd_run(run);
    else if (*fit_cmd) rtdtool::cmd_fit(fit);
    else if (*analyze_cmd) rtdtool::cmd_analyze(analyze);
    else if (*compare_cmd) rtdtool::cmd_compare(cmp);
    else if (*report_cmd) rtdtool::cmd_report(report);
    else if (*synth_cmd) rtdtool::cmd_synth(synth);
  } catch (const rtd::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const rtd::ParseError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kIo;
  } catch (const rtd::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const rtd::AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
