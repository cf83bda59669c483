#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "novikov/blowup.hpp"
#include "novikov/config.hpp"
#include "novikov/invariants.hpp"

namespace novikov {

/// Exit-code contract shared by the library and the CLI:
/// 0 completed (blow-up suspicion included), 2 config error, 3 numerical
/// failure, 4 I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitIoFailure = 4;

/// Resolves the run directory: relative paths land under the NOVIKOV_OUT
/// environment root when it is set.
std::filesystem::path resolve_output_dir(const std::string& configured);

/// Builds the initial state described by a validated config.
NovikovState build_initial_state(const ScenarioConfig& cfg);

struct ScenarioResult {
  int exit_code = kExitOk;
  std::string termination;  // "t_end" or "blowup_suspected"
  std::vector<std::string> flags;
  std::filesystem::path run_dir;
  double wall_seconds = 0.0;
  std::string error;  // set when exit_code != 0

  // In-memory copies of what went to disk, for callers that keep computing.
  MonitorSeries monitors;
  InvariantSeries invariants;
  double fitted_peak_speed = std::numeric_limits<double>::quiet_NaN();
};

/// Runs a scenario end to end and writes monitors.csv, the configured
/// snapshots and the run manifest (JSON) into the run directory.
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* log = nullptr);

/// Writes per-monitor x/y CSV pairs next to an existing run's monitors.csv.
/// Returns an exit code from the contract above.
int emit_plots(const std::filesystem::path& run_dir, std::ostream* log = nullptr);

/// Runs the weak-form residual checker described by the config (no PDE solve)
/// and writes a JSON report; prints one line per test when log is given.
ScenarioResult run_peakon_check(const ScenarioConfig& cfg, std::ostream* log = nullptr);

/// The monitors.csv column set, in file order.
std::vector<std::string> monitor_csv_columns();

/// Formats one monitors.csv document from parallel series (17 significant
/// digits, lossless for binary64).
std::string format_monitor_csv(const MonitorSeries& monitors, const InvariantSeries& invariants);

}  // namespace novikov
