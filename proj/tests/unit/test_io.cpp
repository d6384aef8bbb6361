#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "rtd/error.hpp"
#include "rtd/io.hpp"
#include "rtd/random.hpp"

using namespace rtd;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rtd_test_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string parse_error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    read_rld_csv(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("format_number round-trips") {
  for (double x : {0.0, 1.0, 0.1, 460.517018598809, 1e-300, 123456789.0}) {
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.55) == "0.55");
  CHECK(format_number(10000) == "10000");
}

TEST_CASE("solver configs serialize as flat objects") {
  CHECK(to_json(SolverConfig::wsat(0.55)).dump() == R"({"algorithm":"wsat","noise":0.55})");
  CHECK(to_json(SolverConfig::gwsat(0.5)).dump() == R"({"algorithm":"gwsat","walk_probability":0.5})");
  CHECK(solver_config_from_json(json::parse(R"({"algorithm":"gwsat","wp":0.2})")) == SolverConfig::gwsat(0.2));
  CHECK(solver_config_from_json(to_json(SolverConfig::gsat())) == SolverConfig::gsat());
  CHECK_THROWS_AS(solver_config_from_json(json::parse(R"({"algorithm":"wsat"})")), ContractViolation);
  CHECK_THROWS_AS(solver_config_from_json(json::parse(R"({"algorithm":"wsat","noise":0.5,"x":1})")), ContractViolation);
}

TEST_CASE("RLD CSV layout and round trip") {
  const Rld rld({7, 3, 12}, 5, 20, Provenance{"inst_0", SolverConfig::wsat(0.55), 42});
  const std::string text = to_rld_csv(rld);
  CHECK(text ==
        "# rld v1, n_trials=5, cutoff=20, instance=inst_0, config={\"algorithm\":\"wsat\",\"noise\":0.55}\n"
        "# successes=3, success_rate=0.6, base_seed=42\n"
        "3\n7\n12\n");
  std::istringstream in(text);
  CHECK(read_rld_csv(in) == rld);

  const Rld none({}, 4, 100);
  std::istringstream in2(to_rld_csv(none));
  const Rld back = read_rld_csv(in2);
  CHECK(back == none);
  CHECK(to_rld_csv(none).find("success_rate=0,") != std::string::npos);
}

TEST_CASE("RLD CSV errors carry line numbers") {
  CHECK(parse_error_of("").find("empty") != std::string::npos);
  CHECK(parse_error_of("hello\n").find("line 1") != std::string::npos);
  CHECK(parse_error_of("# rld v1, n_trials=x, cutoff=5, instance=a, config=null\n").find("invalid n_trials") !=
        std::string::npos);
  const std::string bad_value = parse_error_of("# rld v1, n_trials=3, cutoff=5, instance=a, config=null\n1\n2x\n");
  CHECK(bad_value.find("line 3") != std::string::npos);
  CHECK(bad_value.find("invalid run length") != std::string::npos);
  CHECK(parse_error_of("# rld v1, n_trials=3, cutoff=5, instance=a, config=null\n9\n").find("exceeds cutoff") !=
        std::string::npos);
  CHECK(parse_error_of("# rld v1, n_trials=1, cutoff=5, instance=a, config=null\n1\n2\n").find("line 3") !=
        std::string::npos);
  CHECK(parse_error_of("# rld v1, n_trials=1, cutoff=5, instance=a, config={\"algorithm\":1}\n").find(
            "invalid config") != std::string::npos);
}

TEST_CASE("RLD CSV files") {
  const auto dir = scratch_dir("csv");
  const Rld rld({1, 2}, 2, 9, Provenance{"x", std::nullopt, 7});
  write_file_atomically(dir / "a.csv", to_rld_csv(rld));
  CHECK(read_rld_csv(dir / "a.csv") == rld);
  CHECK_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));
  CHECK_THROWS_AS(read_rld_csv(dir / "missing.csv"), IoError);
  write_file_atomically(dir / "bad.csv", "# rld v1, n_trials=2, cutoff=9, instance=x, config=null\n1\nz\n");
  try {
    read_rld_csv(dir / "bad.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("bad.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(write_file_atomically(dir / "no" / "such" / "dir.txt", "x"), IoError);
  CHECK(read_file(dir / "a.csv") == to_rld_csv(rld));
  std::filesystem::remove_all(dir);
}

TEST_CASE("plot data") {
  const CdfSource src = CdfSource::empirical(Rld({2, 2, 5}, 4, 10));
  const CurvePoints step = step_curve(src, 100);
  CHECK(step == CurvePoints{{0, 0}, {2, 0.5}, {5, 0.75}, {10, 0.75}});
  std::ostringstream out;
  write_plot_data(out, step);
  CHECK(out.str() == "0 0\n2 0.5\n5 0.75\n10 0.75\n");
  const CurvePoints sampled = sampled_curve(CdfSource::model(ModelCdf::exponential(10)), 1, 1000, 4);
  REQUIRE(sampled.size() == 4);
  CHECK(sampled[1].first == doctest::Approx(10));
  CHECK(sampled[3].first == 1000);
  CHECK(sampled[1].second == doctest::Approx(0.5));
}

TEST_CASE("report JSON") {
  const Rld rld = sample_model(ModelCdf::exponential(100), 1000, 300, 1);
  const json fit = to_json(fit_weibull(rld));
  CHECK(fit["model"]["family"] == "weibull");
  CHECK(fit["chi2"]["dof"].get<int>() == static_cast<int>(fit["chi2"]["bins"].size()) - 3);
  CHECK(fit["shape_interval"]["level"] == 0.95);
  CHECK(fit["chi2"]["bins"].back()["upper"].is_null());

  const CutoffReport r = optimal_cutoff_expected_time(CdfSource::model(ModelCdf::exponential(50)), SearchGrid{.t_max = 500});
  const json jr = to_json(r);
  CHECK(jr["t_star"].is_null());
  CHECK(jr["degenerate"] == true);

  TestSet set;
  set.descriptor = {20, 85, 1, 3};
  set.discarded_unsat = 2;
  const json js = to_json(set);
  CHECK(js["discarded_count"] == 2);
  CHECK(js["num_clauses"] == 85);
  CHECK(js["rng"] == std::string(kRngAlgorithm));
}
