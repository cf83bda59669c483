#include "novikov/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "novikov/peakon.hpp"
#include "novikov/spectral.hpp"
#include "novikov/weak_form.hpp"

namespace novikov {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("failed to open for writing: " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed to write: " + path.string());
}

RealField bump_field(const GridPtr& grid, const std::vector<BumpSpec>& bumps) {
  return sample(grid, [&](double x) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const double r = (x - b.center) / b.width;
      v += b.amplitude * std::exp(-r * r);
    }
    return v;
  });
}

NovikovState state_from_file(const ScenarioConfig& cfg, const GridPtr& grid) {
  std::ifstream in(cfg.init_file);
  if (!in) throw IoError("failed to open init file: " + cfg.init_file);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string item;
    while (std::getline(ss, item, ',')) columns.push_back(item);
  }
  int n_m = 0, n_n = 0;
  for (const auto& c : columns) {
    if (c.rfind("m_", 0) == 0) ++n_m;
    if (c.rfind("n_", 0) == 0) ++n_n;
  }
  if (columns.empty() || columns[0] != "x" || n_m == 0 || n_m != n_n)
    throw std::invalid_argument("init.file: header must be x,m_1..m_N,n_1..n_N");

  std::vector<RealField> m(n_m, RealField(grid)), n(n_n, RealField(grid));
  for (int k = 0; k < grid->size(); ++k) {
    std::string line;
    if (!std::getline(in, line))
      throw std::invalid_argument("init.file: expected " + std::to_string(grid->size()) +
                                  " sample rows");
    std::stringstream ss(line);
    std::string item;
    std::vector<double> row;
    while (std::getline(ss, item, ',')) row.push_back(std::strtod(item.c_str(), nullptr));
    if (static_cast<int>(row.size()) < 1 + n_m + n_n)
      throw std::invalid_argument("init.file: short row at sample " + std::to_string(k));
    for (int i = 0; i < n_m; ++i) m[i][k] = row[1 + i];
    for (int i = 0; i < n_n; ++i) n[i][k] = row[1 + n_m + i];
  }

  switch (cfg.kind) {
    case ScenarioKind::gx:
    case ScenarioKind::case1:
    case ScenarioKind::case2: {
      if (n_m != 1)
        throw std::invalid_argument("init.file: reduction scenarios take one (m, n) pair");
      const ReductionKind kind = cfg.kind == ScenarioKind::gx      ? ReductionKind::gx
                                 : cfg.kind == ScenarioKind::case1 ? ReductionKind::case1
                                                                   : ReductionKind::case2;
      return make_reduction(kind, m[0], n[0]);
    }
    default:
      return make_state(std::move(m), std::move(n));
  }
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::string& configured) {
  std::filesystem::path dir(configured);
  if (dir.is_absolute()) return dir;
  if (const char* root = std::getenv("NOVIKOV_OUT")) return std::filesystem::path(root) / dir;
  return dir;
}

NovikovState build_initial_state(const ScenarioConfig& cfg) {
  const GridPtr grid = make_grid(cfg.grid_n_points, cfg.grid_length);
  switch (cfg.init_kind) {
    case InitKind::peakon:
      return mollified_peakon_momentum(cfg.peakon, grid, 0.0,
                                       cfg.peakon_sigma_dx * grid->spacing());
    case InitKind::file:
      return state_from_file(cfg, grid);
    case InitKind::bumps:
      break;
  }
  switch (cfg.kind) {
    case ScenarioKind::gx:
      return make_reduction(ReductionKind::gx, bump_field(grid, cfg.m_bumps.at(0)),
                            bump_field(grid, cfg.n_bumps.at(0)));
    case ScenarioKind::case1:
      return make_reduction(ReductionKind::case1, bump_field(grid, cfg.m_bumps.at(0)),
                            bump_field(grid, cfg.n_bumps.at(0)));
    case ScenarioKind::case2:
      return make_reduction(ReductionKind::case2, bump_field(grid, cfg.m_bumps.at(0)),
                            bump_field(grid, cfg.n_bumps.at(0)));
    default: {
      std::vector<RealField> m, n;
      for (int i = 0; i < cfg.n_components; ++i) {
        m.push_back(bump_field(grid, cfg.m_bumps.at(i)));
        n.push_back(bump_field(grid, cfg.n_bumps.at(i)));
      }
      return make_state(std::move(m), std::move(n));
    }
  }
}

std::vector<std::string> monitor_csv_columns() {
  return {"time",          "linf_max",       "general_accum",  "H",
          "H1",            "H2",             "case1_min_uxv",  "case1_min_uvx",
          "case2_min_drift", "case2_max_wronskian"};
}

std::string format_monitor_csv(const MonitorSeries& monitors, const InvariantSeries& invariants) {
  std::ostringstream out;
  const auto columns = monitor_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  auto cell = [](double v) { return std::isfinite(v) ? fmt17(v) : std::string(); };
  auto series_cell = [&](const std::vector<double>& series, int i) {
    return i < static_cast<int>(series.size()) ? fmt17(series[i]) : std::string();
  };
  for (int i = 0; i < monitors.size(); ++i) {
    out << fmt17(monitors.times[i]) << ',' << fmt17(monitors.linf_max[i]) << ','
        << fmt17(monitors.general_accum[i]) << ',';
    if (i < static_cast<int>(invariants.size())) {
      out << cell(invariants[i].H) << ',' << cell(invariants[i].H1) << ','
          << cell(invariants[i].H2) << ',';
    } else {
      out << ",,,";
    }
    out << series_cell(monitors.case1_min_uxv, i) << ','
        << series_cell(monitors.case1_min_uvx, i) << ','
        << series_cell(monitors.case2_min_drift, i) << ','
        << series_cell(monitors.case2_max_wronskian, i) << "\n";
  }
  return out.str();
}

namespace {

class SnapshotWriter {
 public:
  SnapshotWriter(std::vector<double> times, std::filesystem::path dir)
      : pending_(std::move(times)), dir_(std::move(dir)) {
    std::sort(pending_.begin(), pending_.end());
  }

  void operator()(const NovikovState& s) {
    while (next_ < pending_.size() && pending_[next_] <= s.time + 1e-12) {
      write(s);
      ++next_;
    }
  }

  json manifest_entries() const { return entries_; }

 private:
  void write(const NovikovState& s) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", next_);
    const std::filesystem::path path = dir_ / name;
    std::ostringstream out;
    const int N = s.components();
    out << "x";
    for (int i = 1; i <= N; ++i) out << ",m_" << i;
    for (int i = 1; i <= N; ++i) out << ",n_" << i;
    for (int i = 1; i <= N; ++i) out << ",u_" << i;
    for (int i = 1; i <= N; ++i) out << ",v_" << i;
    out << "\n";
    std::vector<RealField> u, v;
    for (int i = 0; i < N; ++i) {
      u.push_back(helmholtz_invert(s.m[i]));
      v.push_back(helmholtz_invert(s.n[i]));
    }
    const PeriodicGrid& grid = s.grid();
    for (int k = 0; k < grid.size(); ++k) {
      out << fmt17(grid.node(k));
      for (int i = 0; i < N; ++i) out << ',' << fmt17(s.m[i][k]);
      for (int i = 0; i < N; ++i) out << ',' << fmt17(s.n[i][k]);
      for (int i = 0; i < N; ++i) out << ',' << fmt17(u[i][k]);
      for (int i = 0; i < N; ++i) out << ',' << fmt17(v[i][k]);
      out << "\n";
    }
    write_text_file(path, out.str());
    entries_.push_back({{"time", s.time}, {"file", std::string(name)}});
  }

  std::vector<double> pending_;
  std::size_t next_ = 0;
  std::filesystem::path dir_;
  json entries_ = json::array();
};

bool wants(const ScenarioConfig& cfg, const char* observer) {
  return std::find(cfg.observers.begin(), cfg.observers.end(), observer) != cfg.observers.end();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* log) {
  ScenarioResult result;
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  result.run_dir = dir;

  try {
    std::filesystem::create_directories(dir);
  } catch (const std::exception& e) {
    result.exit_code = kExitIoFailure;
    result.error = std::string("failed to create run directory: ") + e.what();
    return result;
  }

  NovikovState initial;
  try {
    initial = build_initial_state(cfg);
  } catch (const IoError& e) {
    result.exit_code = kExitIoFailure;
    result.error = e.what();
    return result;
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumericalFailure;
    result.error = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = kExitConfigError;
    result.error = e.what();
    return result;
  }

  SimConfig sim;
  sim.dt = cfg.dt;
  sim.t_end = cfg.t_end;
  sim.dealias = cfg.dealias;
  sim.monitor_stride = cfg.monitor_stride;
  sim.blowup_linf_cap = cfg.blowup_linf_cap;
  sim.rhs_form = cfg.rhs_form;

  auto invariants = std::make_shared<InvariantObserver>();
  auto blowup = std::make_shared<BlowupMonitor>();
  auto snapshots = std::make_shared<SnapshotWriter>(cfg.snapshot_times, dir);

  // Peakon scenarios additionally record the leading velocity field so the
  // measured speed can go into the manifest.
  const bool track = cfg.init_kind == InitKind::peakon;
  auto frame_times = std::make_shared<std::vector<double>>();
  auto frames = std::make_shared<std::vector<RealField>>();

  std::vector<Observer> observers;
  if (wants(cfg, "invariants")) observers.push_back([invariants](const NovikovState& s) { (*invariants)(s); });
  if (wants(cfg, "blowup")) observers.push_back([blowup](const NovikovState& s) { (*blowup)(s); });
  if (wants(cfg, "snapshots")) observers.push_back([snapshots](const NovikovState& s) { (*snapshots)(s); });
  if (track)
    observers.push_back([frame_times, frames](const NovikovState& s) {
      frame_times->push_back(s.time);
      frames->push_back(helmholtz_invert(s.m[0]));
    });

  RunResult run;
  try {
    run = run_simulation(initial, sim, observers);
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumericalFailure;
    result.error = e.what();
    return result;
  } catch (const IoError& e) {
    result.exit_code = kExitIoFailure;
    result.error = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = kExitNumericalFailure;
    result.error = e.what();
    return result;
  }

  result.termination = to_string(run.termination);
  result.monitors = blowup->series();
  result.invariants = invariants->series();

  DetectionPolicy policy = make_default_policy(initial.max_linf(), cfg.blowup_linf_cap);
  if (std::isfinite(cfg.detect_magnitude)) policy.magnitude = cfg.detect_magnitude;
  if (std::isfinite(cfg.detect_rate)) policy.rate = cfg.detect_rate;
  policy.window = cfg.detect_window;
  if (result.monitors.size() >= policy.window) {
    const DivergenceFlags flags = detect_divergence(result.monitors, policy);
    result.flags = flags.to_strings();
    result.monitors.flags = result.flags;
  }

  double formula_speed = std::numeric_limits<double>::quiet_NaN();
  if (track && frames->size() >= 2) {
    const PeakTrack fit = track_peak(*frame_times, *frames);
    result.fitted_peak_speed = fit.fitted_speed;
    formula_speed = peakon_speed(cfg.peakon);
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    write_text_file(dir / "monitors.csv", format_monitor_csv(result.monitors, result.invariants));
    json manifest;
    manifest["config"] = serialize_config(cfg);
    manifest["scenario"] = to_string(cfg.kind);
    manifest["termination"] = result.termination;
    manifest["steps_taken"] = run.steps_taken;
    manifest["wall_seconds"] = result.wall_seconds;
    manifest["flags"] = result.flags;
    manifest["cfl_warning"] = run.cfl_warning;
    manifest["sign_violation_flagged"] = invariants->sign_violation_flagged();
    manifest["snapshots"] = snapshots->manifest_entries();
    if (track && std::isfinite(result.fitted_peak_speed)) {
      manifest["fitted_peak_speed"] = result.fitted_peak_speed;
      manifest["formula_speed"] = formula_speed;
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    result.exit_code = kExitIoFailure;
    result.error = e.what();
    return result;
  }

  if (log) {
    *log << "run " << to_string(cfg.kind) << ": termination=" << result.termination
         << " steps=" << run.steps_taken << " wall=" << result.wall_seconds << "s -> "
         << dir.string() << "\n";
  }
  return result;
}

int emit_plots(const std::filesystem::path& run_dir, std::ostream* log) {
  const std::filesystem::path monitors_path = run_dir / "monitors.csv";
  std::ifstream in(monitors_path);
  if (!in) {
    if (log) *log << "emit-plots: cannot open " << monitors_path.string() << "\n";
    return kExitIoFailure;
  }
  std::string header;
  std::getline(in, header);
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string item;
    while (std::getline(ss, item, ',')) columns.push_back(item);
  }
  if (columns.empty() || columns[0] != "time") {
    if (log) *log << "emit-plots: malformed monitors.csv header\n";
    return kExitIoFailure;
  }
  std::vector<std::vector<std::string>> cells(columns.size());
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string item;
    std::size_t c = 0;
    while (c < columns.size() && std::getline(ss, item, ',')) cells[c++].push_back(item);
    while (c < columns.size()) cells[c++].push_back("");
  }

  try {
    const std::filesystem::path plots = run_dir / "plots";
    std::filesystem::create_directories(plots);
    int written = 0;
    for (std::size_t c = 1; c < columns.size(); ++c) {
      bool any = false;
      for (const auto& v : cells[c])
        if (!v.empty()) any = true;
      if (!any) continue;
      std::ostringstream out;
      out << "time," << columns[c] << "\n";
      for (std::size_t r = 0; r < cells[c].size(); ++r)
        if (!cells[c][r].empty()) out << cells[0][r] << ',' << cells[c][r] << "\n";
      write_text_file(plots / (columns[c] + ".csv"), out.str());
      ++written;
    }
    if (log) *log << "emit-plots: wrote " << written << " series under "
                  << (run_dir / "plots").string() << "\n";
  } catch (const std::exception& e) {
    if (log) *log << "emit-plots: " << e.what() << "\n";
    return kExitIoFailure;
  }
  return kExitOk;
}

ScenarioResult run_peakon_check(const ScenarioConfig& cfg, std::ostream* log) {
  ScenarioResult result;
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  result.run_dir = dir;

  try {
    std::filesystem::create_directories(dir);
  } catch (const std::exception& e) {
    result.exit_code = kExitIoFailure;
    result.error = std::string("failed to create run directory: ") + e.what();
    return result;
  }

  const double window = cfg.peakon.flavor == PeakonFlavor::periodic_unit ? 1.0 : cfg.grid_length;
  const PeakonHistory hist =
      make_peakon_history(cfg.peakon, cfg.weakform_t_end, window, cfg.weakform_speed_factor);
  const TestFunctionSet tests = make_test_set(hist, cfg.weakform_tests, cfg.rng_seed);

  WeakResidualReport report;
  try {
    report = weak_residual(hist, tests);
  } catch (const std::exception& e) {
    result.exit_code = kExitConfigError;
    result.error = e.what();
    return result;
  }

  const double max_residual = report.max_abs();
  const bool passed = max_residual <= cfg.weakform_tolerance;
  result.termination = passed ? "within_tolerance" : "residual_exceeds_tolerance";
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    json doc;
    doc["config"] = serialize_config(cfg);
    doc["speed"] = hist.speed;
    doc["formula_speed"] = peakon_speed(cfg.peakon);
    doc["tolerance"] = cfg.weakform_tolerance;
    doc["max_residual"] = max_residual;
    doc["passed"] = passed;
    json rows = json::array();
    for (std::size_t t = 0; t < report.residuals.size(); ++t)
      rows.push_back({{"test", t}, {"residuals", report.residuals[t]}});
    doc["tests"] = rows;
    write_text_file(dir / "peakon_check.json", doc.dump(2) + "\n");
  } catch (const std::exception& e) {
    result.exit_code = kExitIoFailure;
    result.error = e.what();
    return result;
  }

  if (log) {
    for (std::size_t t = 0; t < report.residuals.size(); ++t) {
      double worst = 0.0;
      for (double r : report.residuals[t]) worst = std::max(worst, std::abs(r));
      *log << "test " << t << ": max residual " << worst << "\n";
    }
    *log << "peakon-check: max residual " << max_residual << " (tolerance "
         << cfg.weakform_tolerance << ") -> " << (passed ? "ok" : "EXCEEDED") << "\n";
  }
  return result;
}

}  // namespace novikov
