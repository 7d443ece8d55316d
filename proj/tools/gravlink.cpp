// gravlink: command-line front end.
//
//   gravlink phase      --config <file> [--method newtonian|action] [--format json|table]
//   gravlink boost-scan --config <file> [--beta-max B] [--steps N] [--model scalar|full] [--order K] [--out file.csv]
//   gravlink bell       --config <file> [--gamma G]
//   gravlink modesum    --config <file>
//
// Exit codes: 0 success, 2 config/usage error, 3 resource budget, 4 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gravlink/cli/commands.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitNumerical = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gravlink::cli::UsageError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gravlink;
  using namespace gravlink::cli;

  CLI::App app{"Relativistic BMV entanglement toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string method = "newtonian";
  std::string format = "json";
  std::optional<double> beta_max;
  int steps = 30;
  std::optional<std::string> model;
  int order = kDefaultSeriesOrder;
  std::optional<std::string> out_path;
  std::optional<double> gamma;

  auto* phase = app.add_subcommand("phase", "Branch phases, relative phase and entanglement");
  phase->add_option("--config", config_path, "Scenario JSON file")->required();
  phase->add_option("--method", method, "newtonian or action");
  phase->add_option("--format", format, "json or table");

  auto* scan = app.add_subcommand("boost-scan", "Frame-invariance residual over a beta grid (CSV)");
  scan->add_option("--config", config_path, "Scenario JSON file")->required();
  scan->add_option("--beta-max", beta_max, "Largest beta on the grid");
  scan->add_option("--steps", steps, "Number of grid intervals");
  scan->add_option("--model", model, "scalar or full");
  scan->add_option("--order", order, "Series truncation order");
  scan->add_option("--out", out_path, "CSV output path (stdout if omitted)");

  auto* bell = app.add_subcommand("bell", "Equally accelerated interferometers");
  bell->add_option("--config", config_path, "Scenario JSON file")->required();
  bell->add_option("--gamma", gamma, "Final Lorentz factor (overrides bell.gamma_final)");

  auto* modesum = app.add_subcommand("modesum", "Truncated Fock-space mediator vs closed form");
  modesum->add_option("--config", config_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const ScenarioFile file = load_scenario_text(read_file(config_path), config_path);
    if (*phase) {
      const Json r = cmd_phase(file, parse_phase_method(method));
      if (format == "table") std::cout << format_phase_table(r);
      else if (format == "json") write_json(std::cout, r);
      else throw UsageError("--format must be json or table");
    } else if (*scan) {
      BoostScanOptions o;
      o.beta_max = beta_max;
      o.steps = steps;
      o.order = order;
      if (model) o.model = parse_quantization_model(*model);
      const BoostScanOutput r = cmd_boost_scan(file, o);
      if (out_path) {
        std::ofstream out(*out_path, std::ios::binary);
        if (!out) throw UsageError("cannot write '" + *out_path + "'");
        out << r.csv;
        Json summary = r.summary;
        summary["out"] = *out_path;
        write_json(std::cout, summary);
      } else {
        std::cout << r.csv;
      }
    } else if (*bell) {
      write_json(std::cout, cmd_bell(file, gamma));
    } else if (*modesum) {
      write_json(std::cout, cmd_modesum(file));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
