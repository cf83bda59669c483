#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "novikov/dynamics.hpp"
#include "novikov/invariants.hpp"
#include "novikov/peakon.hpp"
#include "novikov/spectral.hpp"

using namespace novikov;

namespace {

constexpr double kPi = std::numbers::pi;

// Low-mode random fields keep every product in the dynamics alias-free, which
// is what lets two algebraically equal evaluation routes agree to round-off.
RealField random_low_mode(const GridPtr& grid, int max_mode, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double k0 = 2.0 * kPi / grid->length();
  std::vector<double> a(max_mode + 1), b(max_mode + 1);
  for (int k = 1; k <= max_mode; ++k) {
    a[k] = gauss(rng) / (1.0 + k);
    b[k] = gauss(rng) / (1.0 + k);
  }
  RealField f = sample(grid, [&](double x) {
    double v = 0.0;
    for (int k = 1; k <= max_mode; ++k)
      v += a[k] * std::cos(k * k0 * x) + b[k] * std::sin(k * k0 * x);
    return v;
  });
  const double linf = norms(f).linf;
  if (linf > 0.0) f *= scale / linf;
  return f;
}

NovikovState random_state(const GridPtr& grid, int N, std::mt19937_64& rng,
                          ReductionKind tag = ReductionKind::general) {
  std::vector<RealField> m, n;
  for (int i = 0; i < N; ++i) {
    m.push_back(random_low_mode(grid, 10, 0.5, rng));
    n.push_back(random_low_mode(grid, 10, 0.5, rng));
  }
  return make_state(std::move(m), std::move(n), 0.0, tag);
}

double tendency_rel_diff(const Tendency& a, const Tendency& b) {
  double scale = 0.0, diff = 0.0;
  auto visit = [&](const RealField& fa, const RealField& fb) {
    for (int k = 0; k < fa.size(); ++k) {
      scale = std::max(scale, std::abs(fa[k]));
      diff = std::max(diff, std::abs(fa[k] - fb[k]));
    }
  };
  for (std::size_t i = 0; i < a.dm.size(); ++i) visit(a.dm[i], b.dm[i]);
  for (std::size_t i = 0; i < a.dn.size(); ++i) visit(a.dn[i], b.dn[i]);
  return diff / std::max(scale, 1e-300);
}

RealField gaussian_bump(const GridPtr& grid, double a, double c, double w) {
  return sample(grid, [&](double x) {
    const double r = (x - c) / w;
    return a * std::exp(-r * r);
  });
}

}  // namespace

TEST_CASE("zero state has zero tendency in both forms") {
  const GridPtr grid = make_grid(64, 10.0);
  const NovikovState s = make_state({RealField(grid)}, {RealField(grid)});
  for (const Tendency& t : {rhs_componentwise(s), rhs_transport(s)}) {
    CHECK(norms(t.dm[0]).linf == 0.0);
    CHECK(norms(t.dn[0]).linf == 0.0);
  }
}

TEST_CASE("N=1 with n == m reduces to the Novikov right-hand side") {
  const GridPtr grid = make_grid(128, 15.0);
  std::mt19937_64 rng(17);
  const RealField m = random_low_mode(grid, 10, 0.5, rng);
  const NovikovState s = make_state({m}, {m});

  // Directly coded Novikov form: dm/dt = -u^2 m_x - 3 u u_x m.
  const RealField u = helmholtz_invert(m);
  const RealField ux = derivative(u);
  const RealField mx = derivative(m);
  RealField expected(grid);
  for (int k = 0; k < grid->size(); ++k)
    expected[k] = -u[k] * u[k] * mx[k] - 3.0 * u[k] * ux[k] * m[k];

  for (const Tendency& t : {rhs_componentwise(s), rhs_transport(s)}) {
    double scale = norms(expected).linf, diff = 0.0;
    for (int k = 0; k < grid->size(); ++k)
      diff = std::max(diff, std::abs(t.dm[0][k] - expected[k]));
    CHECK(diff / scale <= 1e-12);
  }
}

TEST_CASE("N=1 tendency matches the Geng-Xue form") {
  const GridPtr grid = make_grid(128, 15.0);
  std::mt19937_64 rng(29);
  const RealField m = random_low_mode(grid, 10, 0.5, rng);
  const RealField n = random_low_mode(grid, 10, 0.5, rng);
  const NovikovState s = make_reduction(ReductionKind::gx, m, n);

  const RealField u = helmholtz_invert(m);
  const RealField v = helmholtz_invert(n);
  const RealField ux = derivative(u);
  const RealField vx = derivative(v);
  const RealField mx = derivative(m);
  const RealField nx = derivative(n);

  const Tendency t = rhs_transport(s);
  double scale = 0.0, diff_m = 0.0, diff_n = 0.0;
  for (int k = 0; k < grid->size(); ++k) {
    const double em = -u[k] * v[k] * mx[k] - 3.0 * ux[k] * v[k] * m[k];
    const double en = -u[k] * v[k] * nx[k] - 3.0 * u[k] * vx[k] * n[k];
    scale = std::max({scale, std::abs(em), std::abs(en)});
    diff_m = std::max(diff_m, std::abs(t.dm[0][k] - em));
    diff_n = std::max(diff_n, std::abs(t.dn[0][k] - en));
  }
  CHECK(diff_m / scale <= 1e-12);
  CHECK(diff_n / scale <= 1e-12);
}

TEST_CASE("transport form: zero state and the u = v collapse") {
  const GridPtr grid = make_grid(96, 12.0);
  const NovikovState zero = make_state({RealField(grid)}, {RealField(grid)});
  const TransportForm tf0 = build_transport(zero);
  CHECK(norms(tf0.a).linf == 0.0);
  CHECK(norms(tf0.b11[0][0]).linf == 0.0);

  std::mt19937_64 rng(41);
  const RealField m = random_low_mode(grid, 8, 0.5, rng);
  const NovikovState s = make_state({m}, {m});
  const TransportForm tf = build_transport(s);
  const RealField u = helmholtz_invert(m);
  const RealField ux = derivative(u);
  double diff_a = 0.0, diff_b = 0.0, scale = 0.0;
  for (int k = 0; k < grid->size(); ++k) {
    diff_a = std::max(diff_a, std::abs(tf.a[k] - u[k] * u[k]));
    const double b_expected = -3.0 * u[k] * ux[k];
    scale = std::max(scale, std::abs(b_expected));
    diff_b = std::max(diff_b, std::abs(tf.b11[0][0][k] - b_expected));
  }
  CHECK(diff_a <= 1e-13);
  CHECK(diff_b / scale <= 1e-12);
}

TEST_CASE("transport matrix entries match an independent expression evaluator") {
  const GridPtr grid = make_grid(128, 15.0);
  std::mt19937_64 rng(43);
  const NovikovState s = random_state(grid, 2, rng);
  const TransportForm tf = build_transport(s);

  const Reconstruction r = reconstruct(s);
  // Straightforward pointwise assembly of the displayed matrices.
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < grid->size(); ++k) {
        double b11 = r.u[i][k] * r.vx[j][k] - r.ux[i][k] * r.v[j][k];
        double b22 = r.v[i][k] * r.ux[j][k] - r.vx[i][k] * r.u[j][k];
        if (i == j) {
          double dm = 0.0, dn = 0.0;
          for (int l = 0; l < 2; ++l) {
            dm += 2.0 * r.ux[l][k] * r.v[l][k] + r.u[l][k] * r.vx[l][k];
            dn += 2.0 * r.vx[l][k] * r.u[l][k] + r.v[l][k] * r.ux[l][k];
          }
          b11 -= dm;
          b22 -= dn;
        }
        scale = std::max({scale, std::abs(b11), std::abs(b22)});
        worst = std::max(worst, std::abs(tf.b11[i][j][k] - b11));
        worst = std::max(worst, std::abs(tf.b22[i][j][k] - b22));
      }
    }
  }
  CHECK(worst / scale <= 1e-12);
}

TEST_CASE("cross-form equivalence on random states") {
  std::mt19937_64 rng(53);
  const GridPtr grid = make_grid(128, 15.0);
  for (int N : {1, 2, 3}) {
    const NovikovState s = random_state(grid, N, rng);
    CHECK(tendency_rel_diff(rhs_componentwise(s), rhs_transport(s)) <= 1e-11);
  }
}

TEST_CASE("rk4: zero stays zero and time advances") {
  const GridPtr grid = make_grid(64, 10.0);
  const NovikovState s = make_state({RealField(grid)}, {RealField(grid)});
  SimConfig cfg;
  cfg.dt = 0.01;
  const StepResult r = step_rk4(s, cfg);
  CHECK(r.outcome == StepOutcome::advanced);
  CHECK(r.state.time == doctest::Approx(0.01));
  CHECK(r.state.max_linf() == 0.0);
}

TEST_CASE("rk4 self-convergence is fourth order on smooth GX data") {
  const GridPtr grid = make_grid(128, 40.0);
  const NovikovState initial = make_reduction(
      ReductionKind::gx, gaussian_bump(grid, 0.8, 17.0, 2.0), gaussian_bump(grid, 0.8, 23.0, 2.0));
  auto advance = [&](double dt) {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.4;
    cfg.monitor_stride = 1 << 20;
    return run_simulation(initial, cfg, {}).final_state;
  };
  const NovikovState a = advance(0.01);
  const NovikovState b = advance(0.005);
  const NovikovState c = advance(0.0025);
  double e1 = 0.0, e2 = 0.0;
  for (int k = 0; k < grid->size(); ++k) {
    e1 = std::max({e1, std::abs(a.m[0][k] - b.m[0][k]), std::abs(a.n[0][k] - b.n[0][k])});
    e2 = std::max({e2, std::abs(b.m[0][k] - c.m[0][k]), std::abs(b.n[0][k] - c.n[0][k])});
  }
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("one rk4 step conserves H to round-off on mollified peakon data") {
  const GridPtr grid = make_grid(512, 40.0);
  const PeakonSpec spec{1, {1.0}, {1.0}, 20.0, PeakonFlavor::line_truncated};
  const NovikovState s0 = mollified_peakon_momentum(spec, grid, 0.0, 4.0 * grid->spacing());
  SimConfig cfg;
  cfg.dt = 5e-4;
  const StepResult r = step_rk4(s0, cfg);
  const double h0 = conserved_H(s0.m[0], s0.n[0]).h_mv;
  const double h1 = conserved_H(r.state.m[0], r.state.n[0]).h_mv;
  CHECK(std::abs(h1 - h0) / (1.0 + std::abs(h0)) <= 1e-10);
}

TEST_CASE("case-1 and case-2 embeddings preserve their identifications") {
  const GridPtr grid = make_grid(128, 20.0);
  std::mt19937_64 rng(61);
  const RealField m0 = random_low_mode(grid, 8, 0.4, rng);
  const RealField n0 = random_low_mode(grid, 8, 0.4, rng);

  SimConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.6;  // 300 steps
  cfg.monitor_stride = 1 << 20;

  {
    const NovikovState s = make_reduction(ReductionKind::case1, m0, n0);
    const NovikovState f = run_simulation(s, cfg, {}).final_state;
    double drift = 0.0;
    for (int k = 0; k < grid->size(); ++k) {
      drift = std::max(drift, std::abs(f.m[0][k] - f.n[1][k]));  // m1 = n2
      drift = std::max(drift, std::abs(f.m[1][k] - f.n[0][k]));  // m2 = n1
    }
    CHECK(drift <= 1e-12 * std::max(1.0, f.max_linf()));
  }
  {
    const NovikovState s = make_reduction(ReductionKind::case2, m0, n0);
    const NovikovState f = run_simulation(s, cfg, {}).final_state;
    double drift = 0.0;
    for (int k = 0; k < grid->size(); ++k) {
      drift = std::max(drift, std::abs(f.m[0][k] - f.n[0][k]));  // m1 = n1
      drift = std::max(drift, std::abs(f.m[1][k] - f.n[1][k]));  // m2 = n2
    }
    CHECK(drift <= 1e-12 * std::max(1.0, f.max_linf()));
  }
}

TEST_CASE("gx embedding of u = v data evolves like the Novikov reduction") {
  const GridPtr grid = make_grid(128, 15.0);
  std::mt19937_64 rng(67);
  const RealField m = random_low_mode(grid, 8, 0.4, rng);
  const NovikovState gx = make_reduction(ReductionKind::gx, m, m);
  const Tendency t = rhs_componentwise(gx);
  // With u = v the m- and n-equations coincide.
  double diff = 0.0;
  for (int k = 0; k < grid->size(); ++k)
    diff = std::max(diff, std::abs(t.dm[0][k] - t.dn[0][k]));
  CHECK(diff <= 1e-12);
}

TEST_CASE("translation equivariance: shifting the data shifts the solution") {
  const GridPtr grid = make_grid(128, 20.0);
  std::mt19937_64 rng(71);
  const RealField m0 = random_low_mode(grid, 8, 0.4, rng);
  const RealField n0 = random_low_mode(grid, 8, 0.4, rng);

  auto shift_one = [&](const RealField& f) {
    RealField out(grid);
    const int n = grid->size();
    for (int k = 0; k < n; ++k) out[(k + 1) % n] = f[k];
    return out;
  };

  SimConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.2;
  cfg.monitor_stride = 1 << 20;

  const NovikovState base =
      run_simulation(make_reduction(ReductionKind::gx, m0, n0), cfg, {}).final_state;
  const NovikovState shifted =
      run_simulation(make_reduction(ReductionKind::gx, shift_one(m0), shift_one(n0)), cfg, {})
          .final_state;

  double diff = 0.0;
  for (int k = 0; k < grid->size(); ++k) {
    diff = std::max(diff, std::abs(shifted.m[0][(k + 1) % grid->size()] - base.m[0][k]));
    diff = std::max(diff, std::abs(shifted.n[0][(k + 1) % grid->size()] - base.n[0][k]));
  }
  CHECK(diff <= 1e-12);
}

TEST_CASE("run_simulation bookkeeping and observer failure context") {
  const GridPtr grid = make_grid(64, 10.0);
  std::mt19937_64 rng(73);
  const NovikovState s =
      make_reduction(ReductionKind::gx, random_low_mode(grid, 6, 0.05, rng),
                     random_low_mode(grid, 6, 0.05, rng));
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;  // 100 steps
  cfg.monitor_stride = 7;

  int samples = 0;
  const RunResult r =
      run_simulation(s, cfg, {[&](const NovikovState&) { ++samples; }});
  CHECK(r.termination == Termination::reached_t_end);
  CHECK(samples == 100 / 7 + 1);

  CHECK_THROWS_WITH_AS(
      run_simulation(s, cfg,
                     {[](const NovikovState&) { throw std::runtime_error("boom"); }}),
      doctest::Contains("observer 0 failed"), std::runtime_error);
}

TEST_CASE("exceeding the sup-norm cap is a terminal status, not an error") {
  const GridPtr grid = make_grid(128, 40.0);
  // Large-amplitude sign-changing data breaks quickly.
  const RealField m0 = gaussian_bump(grid, 3.0, 17.0, 1.5) + gaussian_bump(grid, -3.0, 21.0, 1.5);
  const RealField n0 = gaussian_bump(grid, 3.0, 19.0, 1.5) + gaussian_bump(grid, -3.0, 23.0, 1.5);
  const NovikovState s = make_reduction(ReductionKind::gx, m0, n0);
  SimConfig cfg;
  cfg.dt = 2e-4;
  cfg.t_end = 8.0;
  cfg.monitor_stride = 20;
  cfg.blowup_linf_cap = 30.0;
  const RunResult r = run_simulation(s, cfg, {});
  CHECK(r.termination == Termination::blowup_suspected);
  CHECK(r.final_state.is_finite());
  CHECK(r.final_state.time < cfg.t_end);
}
