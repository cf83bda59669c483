#include <doctest.h>

#include <cmath>

#include "novikov/flow.hpp"
#include "novikov/spectral.hpp"

using namespace novikov;

namespace {

RealField gaussian_bump(const GridPtr& grid, double a, double c, double w) {
  return sample(grid, [&](double x) {
    const double r = (x - c) / w;
    return a * std::exp(-r * r);
  });
}

// History of identical snapshots: a steady velocity field.
StateHistory steady_history(const NovikovState& s, double t_end, int samples) {
  StateHistory history;
  for (int i = 0; i <= samples; ++i) {
    NovikovState copy = s;
    copy.time = t_end * i / samples;
    history.append(copy);
  }
  return history;
}

}  // namespace

TEST_CASE("zero velocity: the flow is the identity with unit jacobian") {
  const GridPtr grid = make_grid(64, 10.0);
  const NovikovState s = make_state({RealField(grid)}, {RealField(grid)});
  const StateHistory history = steady_history(s, 1.0, 4);
  const FlowMap map = flow_integrate(history, FlowSpeedKind::general_a, 1.0);
  for (int k = 0; k < grid->size(); ++k) {
    CHECK(map.positions[k] == doctest::Approx(grid->node(k)).epsilon(0.0).scale(1.0));
    CHECK(map.jacobian[k] == doctest::Approx(1.0));
  }
}

TEST_CASE("constant velocity: linear advection") {
  const GridPtr grid = make_grid(64, 10.0);
  // Constant momenta give constant u, v, hence a = u v constant.
  const NovikovState s = make_state({RealField(grid, 0.8)}, {RealField(grid, 0.5)});
  const double c = 0.8 * 0.5;
  const StateHistory history = steady_history(s, 2.0, 8);
  const FlowMap map = flow_integrate(history, FlowSpeedKind::general_a, 2.0);
  for (int k = 0; k < grid->size(); ++k) {
    CHECK(map.positions[k] == doctest::Approx(grid->node(k) + c * 2.0).epsilon(1e-13));
    CHECK(map.jacobian[k] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("case speeds coincide with the general speed on tagged states") {
  const GridPtr grid = make_grid(128, 20.0);
  const RealField m0 = gaussian_bump(grid, 0.6, 8.0, 1.5);
  const RealField n0 = gaussian_bump(grid, 0.5, 12.0, 1.5);

  const NovikovState case1 = make_reduction(ReductionKind::case1, m0, n0);
  const StateHistory h1 = steady_history(case1, 0.5, 2);
  const FlowMap general = flow_integrate(h1, FlowSpeedKind::general_a, 0.5);
  const FlowMap tagged = flow_integrate(h1, FlowSpeedKind::case1_2uv, 0.5);
  for (int k = 0; k < grid->size(); ++k)
    CHECK(general.positions[k] == doctest::Approx(tagged.positions[k]).epsilon(1e-12));

  const NovikovState case2 = make_reduction(ReductionKind::case2, m0, n0);
  const StateHistory h2 = steady_history(case2, 0.5, 2);
  const FlowMap general2 = flow_integrate(h2, FlowSpeedKind::general_a, 0.5);
  const FlowMap tagged2 = flow_integrate(h2, FlowSpeedKind::case2_u2v2, 0.5);
  for (int k = 0; k < grid->size(); ++k)
    CHECK(general2.positions[k] == doctest::Approx(tagged2.positions[k]).epsilon(1e-12));
}

TEST_CASE("requesting a time outside the stored history is an error") {
  const GridPtr grid = make_grid(64, 10.0);
  const NovikovState s = make_state({RealField(grid, 0.1)}, {RealField(grid, 0.1)});
  const StateHistory history = steady_history(s, 1.0, 4);
  CHECK_THROWS_AS(flow_integrate(history, FlowSpeedKind::general_a, 1.5), std::invalid_argument);
}

TEST_CASE("trig and spline speed interpolation agree on smooth fields") {
  const GridPtr grid = make_grid(256, 20.0);
  const NovikovState s = make_state({gaussian_bump(grid, 0.7, 9.0, 2.0)},
                                    {gaussian_bump(grid, 0.7, 11.0, 2.0)});
  const StateHistory history = steady_history(s, 1.0, 4);
  FlowOptions trig;
  FlowOptions spline;
  spline.interp = FlowInterp::cubic_spline;
  const FlowMap a = flow_integrate(history, FlowSpeedKind::general_a, 1.0, trig);
  const FlowMap b = flow_integrate(history, FlowSpeedKind::general_a, 1.0, spline);
  double diff = 0.0;
  for (int k = 0; k < grid->size(); ++k)
    diff = std::max(diff, std::abs(a.positions[k] - b.positions[k]));
  CHECK(diff <= 1e-5);
}

TEST_CASE("integrated jacobian matches finite differences on a short GX run") {
  const GridPtr grid = make_grid(256, 40.0);
  const NovikovState initial = make_reduction(
      ReductionKind::gx, gaussian_bump(grid, 0.8, 17.0, 2.0), gaussian_bump(grid, 0.8, 23.0, 2.0));

  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.monitor_stride = 5;

  StateHistory history;
  run_simulation(initial, cfg, {history.recorder()});
  const FlowMap map = flow_integrate(history, FlowSpeedKind::general_a, 0.5);

  const int n = grid->size();
  const double L = grid->length();
  auto pos = [&](int j) {
    const int wraps = (j < 0) ? -((-j + n - 1) / n) : j / n;
    return map.positions[((j % n) + n) % n] + wraps * L;
  };
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double fd = (-pos(k + 2) + 8.0 * pos(k + 1) - 8.0 * pos(k - 1) + pos(k - 2)) /
                      (12.0 * grid->spacing());
    worst = std::max(worst, std::abs(fd - map.jacobian[k]) / std::abs(map.jacobian[k]));
  }
  CHECK(worst <= 1e-4);
  CHECK(map.min_jacobian_path > 0.0);
}
