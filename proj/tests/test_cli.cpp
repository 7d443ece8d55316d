#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "gravlink/cli/commands.hpp"

using namespace gravlink;
using namespace gravlink::cli;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_path(const std::string& name) { return std::string(GRAVLINK_CONFIG_DIR) + "/" + name; }

ScenarioFile load(const std::string& name) { return load_scenario_text(slurp(config_path(name)), name); }

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("gravlink_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const fs::path err = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string("\"") + GRAVLINK_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::size_t error_line(const std::string& text) {
  try {
    load_scenario_text(text, "t.json");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

const char* kBase = R"({
  "mass": 1.0,
  "tau": 1.0,
  "geometry": {"mode": "d1d2", "d1": 1.0, "d2": 1.5}
})";

}  // namespace

TEST(Config, LoadsShippedExamples) {
  for (const char* name : {"stationary.json", "boost_scan.json", "bell.json", "modesum.json"})
    EXPECT_NO_THROW(load(name)) << name;
  const ScenarioFile f = load("boost_scan.json");
  ASSERT_TRUE(f.boost.has_value());
  EXPECT_EQ(f.boost->beta, 0.3);
  EXPECT_FALSE(f.boost->axis_given);
  EXPECT_NEAR(dot(f.boost->axis, f.separation_axis()), 0.0, 1e-15);
}

TEST(Config, UnknownKeysAreRejectedWithLine) {
  const std::string text = "{\n  \"mass\": 1.0,\n  \"tau\": 1.0,\n  \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1.0, \"d2\": 1.5},\n  \"colour\": 3\n}\n";
  try {
    load_scenario_text(text, "t.json");
    FAIL() << "accepted an unknown key";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("t.json:5:"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
  const std::string nested =
      "{\n  \"mass\": 1.0,\n  \"tau\": 1.0,\n  \"geometry\": {\n    \"mode\": \"d1d2\",\n    \"d1\": 1.0,\n    \"d2\": 1.5,\n    \"d3\": 2\n  }\n}\n";
  EXPECT_EQ(error_line(nested), 8u);
}

TEST(Config, SchemaErrorsAreLineAnchored) {
  EXPECT_EQ(error_line("{\n  \"mass\": \"heavy\",\n  \"tau\": 1.0,\n  \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1, \"d2\": 1.5}\n}"), 2u);
  EXPECT_EQ(error_line("{\n  \"mass\": 1,\n  \"tau\": 1.0,\n\n  \"geometry\": {\"mode\": \"ring\"}\n}"), 5u);
  EXPECT_EQ(error_line("{\n  \"mass\": 1,\n  \"tau\": 1.0,\n  \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1, \"d2\": 3}\n}"), 4u);
  EXPECT_EQ(error_line("{\n  \"mass\": 1,\n  \"tau\": 1.0,\n  \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1, \"d2\": 1.5},\n  \"boost\": {\n    \"beta\": 1.5\n  }\n}"), 6u);
  EXPECT_GT(error_line("{\"mass\": 1,\n \"tau\": }"), 0u);  // syntax error
  EXPECT_GT(error_line("{\"tau\": 1, \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1, \"d2\": 1.5}}"), 0u);  // missing mass
  // Geometry mode decides which keys are allowed.
  EXPECT_GT(error_line("{\"mass\": 1, \"tau\": 1, \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1, \"d2\": 1.5, \"positions\": {}}}"), 0u);
}

TEST(Config, EmittedScenarioRoundTrips) {
  for (const char* name : {"stationary.json", "boost_scan.json", "bell.json"}) {
    const ScenarioFile f = load(name);
    const Json first = cmd_phase(f, PhaseMethod::newtonian);
    const ScenarioFile again = load_scenario_text(to_json_text(first["scenario"]), "emitted");
    const Json second = cmd_phase(again, PhaseMethod::newtonian);
    EXPECT_EQ(to_json_text(first["phases"]), to_json_text(second["phases"])) << name;
    EXPECT_EQ(to_json_text(first["scenario"]), to_json_text(second["scenario"])) << name;
    EXPECT_EQ(first["negativity"].get<double>(), second["negativity"].get<double>());
  }
}

TEST(Commands, PhaseOnUnitDistances) {
  const Json r = cmd_phase(load("stationary.json"), PhaseMethod::newtonian);
  EXPECT_EQ(r["distances"]["ll"].get<double>(), 1.0);
  EXPECT_EQ(r["phases"]["ll"].get<double>(), 1.0);
  EXPECT_EQ(r["phases"]["uu"].get<double>(), 1.0);
  const Json a = cmd_phase(load("stationary.json"), PhaseMethod::action_integral);
  for (const char* k : {"ll", "lu", "ul", "uu"})
    EXPECT_NEAR(a["phases"][k].get<double>() / r["phases"][k].get<double>(), 1.0, 1e-9);
}

TEST(Commands, ZeroTauGivesNothing) {
  ScenarioFile f = load("stationary.json");
  f.tau = 0.0;
  const Json r = cmd_phase(f, PhaseMethod::newtonian);
  for (const char* k : {"ll", "lu", "ul", "uu"}) EXPECT_EQ(r["phases"][k].get<double>(), 0.0);
  EXPECT_NEAR(r["negativity"].get<double>(), 0.0, 1e-15);
}

TEST(Commands, BoostScanRows) {
  BoostScanOptions o;
  o.model = QuantizationModel::scalar_only;
  o.beta_max = 0.3;
  o.steps = 3;
  const BoostScanOutput s = cmd_boost_scan(load("boost_scan.json"), o);
  std::istringstream in(s.csv);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  EXPECT_EQ(header, "beta,phase_factor,residual,negativity,exact_factor,exact_residual");
  EXPECT_EQ(row0.substr(0, 4), "0,1,");
  // beta = 0.1: order-4 gamma^4 = 1.0203, exact 1.0203040506...
  double beta = 0, factor = 0, residual = 0, neg = 0, exact = 0;
  ASSERT_EQ(std::sscanf(row1.c_str(), "%lf,%lf,%lf,%lf,%lf", &beta, &factor, &residual, &neg, &exact), 5);
  EXPECT_NEAR(beta, 0.1, 1e-16);
  EXPECT_NEAR(factor, 1.0203, 1e-15);
  EXPECT_NEAR(exact, 1.0203040506070809, 1e-15);
  EXPECT_EQ(s.summary["rows"].get<std::size_t>(), 4u);

  o.model = QuantizationModel::scalar_plus_vector;
  o.steps = 30;
  const BoostScanOutput full = cmd_boost_scan(load("boost_scan.json"), o);
  std::istringstream fin(full.csv);
  std::getline(fin, header);
  std::string line;
  int rows = 0;
  while (std::getline(fin, line)) {
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &beta, &factor, &residual), 3);
    if (rows == 0) {
      EXPECT_EQ(factor, 1.0);
    }
    EXPECT_LE(std::abs(residual), 2 * std::pow(beta, 4));
    ++rows;
  }
  EXPECT_EQ(rows, 31);
}

TEST(Commands, BoostScanFlagValidation) {
  BoostScanOptions o;
  o.beta_max = 1.0;
  EXPECT_THROW(cmd_boost_scan(load("boost_scan.json"), o), UsageError);
  o.beta_max = 0.5;
  o.steps = 0;
  EXPECT_THROW(cmd_boost_scan(load("boost_scan.json"), o), UsageError);
  EXPECT_THROW(cmd_boost_scan(load("stationary.json"), BoostScanOptions{}), UsageError);
}

TEST(Commands, Bell) {
  const Json r = cmd_bell(load("bell.json"));
  for (const char* k : {"ll", "lu", "ul", "uu"}) EXPECT_NEAR(r["phase_ratio"][k].get<double>(), 0.5, 1e-15);
  EXPECT_LE(r["stretched"]["negativity"].get<double>(), r["rest"]["negativity"].get<double>());
  const Json same = cmd_bell(load("bell.json"), 1.0);
  EXPECT_EQ(to_json_text(same["rest"]["phases"]), to_json_text(same["stretched"]["phases"]));
  EXPECT_THROW(cmd_bell(load("bell.json"), 0.5), UsageError);
}

TEST(Commands, ModesumRecurrence) {
  const Json r = cmd_modesum(load("modesum.json"));
  EXPECT_TRUE(r["hermitian"].get<bool>());
  EXPECT_TRUE(r["commutators"]["pass"].get<bool>());
  EXPECT_LE(r["final_trace_distance"].get<double>(), 1e-8);
  EXPECT_LE(r["max_branch_population_drift"].get<double>(), 1e-10);
  ScenarioFile f = load("modesum.json");
  f.constants.G = 0.0;
  const Json free = cmd_modesum(f);
  for (const auto& s : free["samples"]) EXPECT_LE(s["negativity"].get<double>(), 1e-12);
}

TEST(Binary, ExitCodesAndDeterminism) {
  const RunResult ok = run("phase --config \"" + config_path("stationary.json") + "\"");
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(ok.out, run("phase --config \"" + config_path("stationary.json") + "\"").out);
  EXPECT_NE(ok.out.find("\"negativity\""), std::string::npos);

  const RunResult table = run("phase --format table --config \"" + config_path("stationary.json") + "\"");
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("delta_phi"), std::string::npos);

  const fs::path bad = write_temp("bad.json", "{\n  \"mass\": 1,\n  \"tau\": 1,\n  \"speed\": 3,\n  \"geometry\": {\"mode\": \"d1d2\", \"d1\": 1, \"d2\": 1.5}\n}\n");
  const RunResult e = run("phase --config \"" + bad.string() + "\"");
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.err.find("bad.json:4:"), std::string::npos) << e.err;

  EXPECT_EQ(run("phase --config /nonexistent/x.json").code, 2);
  EXPECT_EQ(run("phase --method guess --config \"" + config_path("stationary.json") + "\"").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("boost-scan --beta-max 1.2 --config \"" + config_path("boost_scan.json") + "\"").code, 2);
  EXPECT_EQ(run("bell --gamma 0.3 --config \"" + config_path("bell.json") + "\"").code, 2);

  const fs::path huge = write_temp("huge.json", std::string(kBase).substr(0, std::string(kBase).size() - 1) +
                                                       ",\n  \"modesum\": {\"wavenumbers\": [1, 2, 3, 4], \"volume\": 1, \"fock_cutoff\": 12}\n}\n");
  const RunResult big = run("modesum --config \"" + huge.string() + "\"");
  EXPECT_EQ(big.code, 3) << big.err;
}

TEST(Binary, ScanCsvIsByteIdentical) {
  const fs::path a = scratch_dir() / "a.csv";
  const fs::path b = scratch_dir() / "b.csv";
  const std::string cfg = "\"" + config_path("boost_scan.json") + "\"";
  ASSERT_EQ(run("boost-scan --config " + cfg + " --steps 30 --model scalar --out \"" + a.string() + "\"").code, 0);
  ASSERT_EQ(run("boost-scan --config " + cfg + " --steps 30 --model scalar --out \"" + b.string() + "\"").code, 0);
  const std::string ca = slurp(a);
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b));
  const RunResult stdout_run = run("boost-scan --config " + cfg + " --steps 30 --model scalar");
  EXPECT_EQ(stdout_run.out, ca);
}

TEST(Binary, ModesumAndBellRun) {
  const RunResult m = run("modesum --config \"" + config_path("modesum.json") + "\"");
  EXPECT_EQ(m.code, 0) << m.err;
  const Json j = Json::parse(m.out);
  EXPECT_LE(j["final_trace_distance"].get<double>(), 1e-8);
  const RunResult b = run("bell --config \"" + config_path("bell.json") + "\"");
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Json::parse(b.out)["expected_ratio"].get<double>(), 0.5);
}
