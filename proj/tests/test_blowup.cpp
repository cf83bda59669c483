#include <doctest.h>

#include <cmath>
#include <numbers>

#include "novikov/blowup.hpp"
#include "novikov/dynamics.hpp"
#include "novikov/spectral.hpp"

using namespace novikov;

namespace {

constexpr double kPi = std::numbers::pi;

RealField gaussian_bump(const GridPtr& grid, double a, double c, double w) {
  return sample(grid, [&](double x) {
    const double r = (x - c) / w;
    return a * std::exp(-r * r);
  });
}

NovikovState constant_state(const GridPtr& grid, double value, double time) {
  NovikovState s = make_state({RealField(grid, value)}, {RealField(grid)}, time);
  return s;
}

}  // namespace

TEST_CASE("general monitor: zero state accumulates nothing") {
  const GridPtr grid = make_grid(64, 10.0);
  MonitorSeries series;
  monitor_general(constant_state(grid, 0.0, 0.0), series);
  monitor_general(constant_state(grid, 0.0, 1.0), series);
  CHECK(series.general_accum.back() == 0.0);
}

TEST_CASE("general monitor: trapezoid of a constant sup norm") {
  const GridPtr grid = make_grid(64, 10.0);
  MonitorSeries series;
  monitor_general(constant_state(grid, 2.0, 0.0), series);
  monitor_general(constant_state(grid, 2.0, 0.5), series);
  // Rectangle of height ||M||^2 = 4 over dt = 0.5.
  CHECK(series.general_accum.back() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("general monitor accumulator matches an offline trapezoid recomputation") {
  const GridPtr grid = make_grid(128, 40.0);
  const NovikovState initial = make_reduction(
      ReductionKind::gx, gaussian_bump(grid, 0.7, 17.0, 2.0), gaussian_bump(grid, 0.7, 23.0, 2.0));
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.monitor_stride = 5;
  BlowupMonitor monitor;
  run_simulation(initial, cfg, {[&](const NovikovState& s) { monitor(s); }});
  const MonitorSeries& series = monitor.series();
  double accum = 0.0;
  for (int i = 1; i < series.size(); ++i) {
    const double a = series.linf_max[i - 1], b = series.linf_max[i];
    accum += 0.5 * (series.times[i] - series.times[i - 1]) * (a * a + b * b);
    CHECK(series.general_accum[i] == doctest::Approx(accum).epsilon(1e-12));
  }
}

TEST_CASE("general accumulator is additive over a restart") {
  const GridPtr grid = make_grid(128, 40.0);
  const NovikovState initial = make_reduction(
      ReductionKind::gx, gaussian_bump(grid, 0.7, 17.0, 2.0), gaussian_bump(grid, 0.7, 23.0, 2.0));
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.monitor_stride = 5;

  // Single run to t = 0.4.
  cfg.t_end = 0.4;
  BlowupMonitor whole;
  run_simulation(initial, cfg, {[&](const NovikovState& s) { whole(s); }});

  // Run to 0.2, restart from the final state, continue appending.
  cfg.t_end = 0.2;
  BlowupMonitor split;
  const RunResult first =
      run_simulation(initial, cfg, {[&](const NovikovState& s) { split(s); }});
  const RunResult second = run_simulation(
      first.final_state, cfg,
      {[&](const NovikovState& s) {
        if (s.time > split.series().times.back()) split(s);
      }});
  CHECK(second.final_state.time == doctest::Approx(0.4));
  CHECK(split.series().general_accum.back() ==
        doctest::Approx(whole.series().general_accum.back()).epsilon(1e-12));
}

TEST_CASE("case-1 monitor closed forms") {
  const GridPtr grid = make_grid(128, 2.0 * kPi);
  const RealField u = sample(grid, [](double x) { return std::sin(x); });
  const RealField one(grid, 1.0);
  const auto [min_uxv, min_uvx] = monitor_case1(u, one);
  CHECK(min_uxv == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(min_uvx == doctest::Approx(0.0).epsilon(0.0).scale(1.0));
  const auto [zero_a, zero_b] = monitor_case1(RealField(grid), RealField(grid));
  CHECK(zero_a == 0.0);
  CHECK(zero_b == 0.0);
}

TEST_CASE("case-2 monitor closed forms and symmetry") {
  const GridPtr grid = make_grid(128, 2.0 * kPi);
  const RealField u = sample(grid, [](double x) { return std::sin(x); });
  const RealField v = sample(grid, [](double x) { return std::cos(x); });
  const auto [min_drift, max_wronskian] = monitor_case2(u, v);
  // u^2 + v^2 is constant, so u u_x + v v_x vanishes identically.
  CHECK(std::abs(min_drift) <= 1e-10);
  // u_x v - u v_x = cos^2 + sin^2 = 1.
  CHECK(max_wronskian == doctest::Approx(1.0).epsilon(1e-10));

  const auto [drift_same, wronw_same] = monitor_case2(u, u);
  CHECK(wronw_same <= 1e-12);
  (void)drift_same;
}

TEST_CASE("monitors agree with an elementwise scan oracle") {
  const GridPtr grid = make_grid(128, 17.0);
  const RealField u = sample(grid, [](double x) { return std::sin(0.9 * x) + 0.2 * std::cos(2.1 * x); });
  const RealField v = sample(grid, [](double x) { return std::cos(1.3 * x) - 0.1; });
  const RealField ux = derivative(u);
  const RealField vx = derivative(v);
  double scan_uxv = 1e300, scan_uvx = 1e300, scan_drift = 1e300, scan_w = 0.0;
  for (int k = 0; k < grid->size(); ++k) {
    scan_uxv = std::min(scan_uxv, ux[k] * v[k]);
    scan_uvx = std::min(scan_uvx, u[k] * vx[k]);
    scan_drift = std::min(scan_drift, u[k] * ux[k] + v[k] * vx[k]);
    scan_w = std::max(scan_w, std::abs(ux[k] * v[k] - u[k] * vx[k]));
  }
  const auto [min_uxv, min_uvx] = monitor_case1(u, v);
  const auto [min_drift, max_w] = monitor_case2(u, v);
  CHECK(min_uxv == doctest::Approx(scan_uxv).epsilon(1e-14));
  CHECK(min_uvx == doctest::Approx(scan_uvx).epsilon(1e-14));
  CHECK(min_drift == doctest::Approx(scan_drift).epsilon(1e-14));
  CHECK(max_w == doctest::Approx(scan_w).epsilon(1e-14));
}

TEST_CASE("detect_divergence: flat series raises nothing") {
  MonitorSeries series;
  for (int i = 0; i < 40; ++i) {
    series.times.push_back(0.1 * i);
    series.linf_max.push_back(1.0);
    series.general_accum.push_back(0.1 * i);
    series.case1_min_uxv.push_back(-0.2);
    series.case1_min_uvx.push_back(-0.1);
  }
  DetectionPolicy policy = make_default_policy(1.0, 100.0);
  CHECK_FALSE(detect_divergence(series, policy).any());
}

TEST_CASE("detect_divergence: manufactured -1/(T - t) divergence flags before T") {
  const double T = 1.0;
  MonitorSeries series;
  bool flagged = false;
  DetectionPolicy policy = make_default_policy(1.0, 1e12);
  for (int i = 0; i < 2000; ++i) {
    const double t = T * i / 2000.0;
    series.times.push_back(t);
    series.linf_max.push_back(1.0);
    series.general_accum.push_back(0.0);
    series.case1_min_uxv.push_back(-1.0 / (T - t));
    series.case1_min_uvx.push_back(0.0);
    if (series.size() >= policy.window && detect_divergence(series, policy).case1_uxv) {
      flagged = true;
      break;
    }
  }
  CHECK(flagged);
  CHECK(series.times.back() < T);
}

TEST_CASE("detect_divergence rejects series shorter than the window") {
  MonitorSeries series;
  series.times = {0.0, 0.1};
  series.linf_max = {1.0, 1.0};
  series.general_accum = {0.0, 0.1};
  CHECK_THROWS_WITH_AS(detect_divergence(series, make_default_policy(1.0, 10.0)),
                       "detect_divergence: insufficient data", std::invalid_argument);
}

TEST_CASE("blowup observer attaches case monitors by reduction tag") {
  const GridPtr grid = make_grid(64, 10.0);
  BlowupMonitor tagged;
  tagged(make_reduction(ReductionKind::gx, RealField(grid, 0.5), RealField(grid, 0.5)));
  CHECK(tagged.series().case1_min_uxv.size() == 1);
  CHECK(tagged.series().case2_min_drift.empty());

  BlowupMonitor untagged;
  untagged(make_state({RealField(grid, 0.5)}, {RealField(grid, 0.5)}));
  CHECK(untagged.series().case1_min_uxv.empty());
}
