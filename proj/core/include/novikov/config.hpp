#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "novikov/dynamics.hpp"
#include "novikov/peakon.hpp"

namespace novikov {

enum class ScenarioKind { general, gx, case1, case2, peakon, periodic_peakon };

const char* to_string(ScenarioKind kind);

/// amplitude * exp(-((x - center)/width)^2)
struct BumpSpec {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
};

enum class InitKind { bumps, peakon, file };

/// Scenario description parsed from the flat `section.key = value` config
/// grammar (see the README for the full key list and defaults).
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::gx;
  int n_components = 1;  // general scenarios only; reductions fix their own N

  int grid_n_points = 256;
  double grid_length = 40.0;

  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  int monitor_stride = 10;
  double blowup_linf_cap = 1e4;
  RhsForm rhs_form = RhsForm::componentwise;

  InitKind init_kind = InitKind::bumps;
  // Two-field bump families (gx / case1 / case2), or per-component families
  // for general scenarios (outer index = component).
  std::vector<std::vector<BumpSpec>> m_bumps{{}};
  std::vector<std::vector<BumpSpec>> n_bumps{{}};
  std::string init_file;

  PeakonSpec peakon{1, {1.0}, {1.0}, 0.0, PeakonFlavor::line_truncated};
  double peakon_sigma_dx = 4.0;  // mollifier width in grid spacings

  std::vector<double> snapshot_times;
  std::string output_dir = "novikov-run";
  std::vector<std::string> observers{"invariants", "blowup", "snapshots"};

  // Divergence-detection policy; NaN means "derive the default at run time".
  double detect_magnitude = std::numeric_limits<double>::quiet_NaN();
  double detect_rate = std::numeric_limits<double>::quiet_NaN();
  int detect_window = 20;

  // Weak-form checker settings (peakon-check subcommand).
  int weakform_tests = 20;
  double weakform_t_end = 1.0;
  double weakform_speed_factor = 1.0;
  double weakform_tolerance = 1e-6;

  std::uint64_t rng_seed = 0;
};

struct ConfigParseResult {
  ScenarioConfig config;
  std::vector<std::string> errors;  // every violation, not just the first
  bool ok() const { return errors.empty(); }
};

/// Parses and validates a configuration document. Unknown keys and constraint
/// violations are all reported by name.
ConfigParseResult parse_config(const std::string& text);

/// Canonical text form; parse(serialize(parse(text))) == parse(text).
std::string serialize_config(const ScenarioConfig& config);

}  // namespace novikov
