// Command-line front end: simulate / peakon-check / verify / emit-plots.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "novikov/config.hpp"
#include "novikov/scenario.hpp"
#include "novikov/verify.hpp"

namespace {

int load_config(const std::string& path, novikov::ScenarioConfig& config) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    return novikov::kExitConfigError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const novikov::ConfigParseResult parsed = novikov::parse_config(buffer.str());
  if (!parsed.ok()) {
    std::cerr << "config errors in " << path << ":\n";
    for (const auto& error : parsed.errors) std::cerr << "  - " << error << "\n";
    return novikov::kExitConfigError;
  }
  config = parsed.config;
  return novikov::kExitOk;
}

int finish(const novikov::ScenarioResult& result) {
  if (result.exit_code != novikov::kExitOk)
    std::cerr << "error: " << result.error << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for the multi-component Novikov system"};
  app.require_subcommand(1);

  std::string simulate_config;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario described by a config file");
  simulate->add_option("config", simulate_config, "configuration file")->required();

  std::string check_config;
  auto* peakon_check =
      app.add_subcommand("peakon-check", "Weak-form residual check of the exact peakon");
  peakon_check->add_option("config", check_config, "configuration file")->required();

  std::string verify_config;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("config", verify_config, "optional overrides (verify.* keys)");
  verify->add_option("--report", verify_out, "path for the JSON report")
      ->default_val("verify_report.json");

  std::string plots_dir;
  auto* emit = app.add_subcommand("emit-plots", "Write per-monitor x/y CSV pairs for a run");
  emit->add_option("run_dir", plots_dir, "run directory containing monitors.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      novikov::ScenarioConfig config;
      if (int rc = load_config(simulate_config, config); rc != 0) return rc;
      return finish(novikov::run_scenario(config, &std::cout));
    }

    if (peakon_check->parsed()) {
      novikov::ScenarioConfig config;
      if (int rc = load_config(check_config, config); rc != 0) return rc;
      return finish(novikov::run_peakon_check(config, &std::cout));
    }

    if (verify->parsed()) {
      novikov::VerifyOptions options;
      if (!verify_config.empty()) {
        // The verify overrides ride in the same grammar: verify.dt_scale,
        // verify.zero_data, rng.seed.
        std::ifstream in(verify_config);
        if (!in) {
          std::cerr << "error: cannot open config file: " << verify_config << "\n";
          return novikov::kExitConfigError;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        std::istringstream lines(buffer.str());
        std::string line;
        while (std::getline(lines, line)) {
          const auto eq = line.find('=');
          if (eq == std::string::npos) continue;
          auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
          };
          const std::string key = strip(line.substr(0, eq));
          const std::string value = strip(line.substr(eq + 1));
          if (key == "verify.dt_scale") options.dt_scale = std::stod(value);
          else if (key == "verify.zero_data") options.zero_data = value == "true";
          else if (key == "rng.seed") options.rng_seed = std::stoull(value);
          else if (!key.empty() && key[0] != '#') {
            std::cerr << "config errors in " << verify_config << ":\n  - unknown key '" << key
                      << "'\n";
            return novikov::kExitConfigError;
          }
        }
      }
      const novikov::VerifyReport report = novikov::run_verification(options, &std::cout);
      std::ofstream out(verify_out);
      if (!out) {
        std::cerr << "error: cannot write report: " << verify_out << "\n";
        return novikov::kExitIoFailure;
      }
      out << novikov::verify_report_json(report);
      std::cout << (report.all_passed() ? "all criteria passed" : "CRITERIA FAILED") << "; report: "
                << verify_out << "\n";
      return report.all_passed() ? novikov::kExitOk : 1;
    }

    if (emit->parsed()) {
      return novikov::emit_plots(std::filesystem::path(plots_dir), &std::cout);
    }
  } catch (const novikov::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return novikov::kExitNumericalFailure;
  } catch (const novikov::IoError& e) {
    std::cerr << "io failure: " << e.what() << "\n";
    return novikov::kExitIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return novikov::kExitNumericalFailure;
  }
  return 0;
}
