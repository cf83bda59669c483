#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "novikov/spectral.hpp"

using namespace novikov;

namespace {

constexpr double kPi = std::numbers::pi;

RealField random_low_mode(const GridPtr& grid, int max_mode, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double k0 = 2.0 * kPi / grid->length();
  std::vector<double> a(max_mode + 1), b(max_mode + 1);
  for (int k = 1; k <= max_mode; ++k) {
    a[k] = gauss(rng) / (1.0 + k);
    b[k] = gauss(rng) / (1.0 + k);
  }
  return sample(grid, [&](double x) {
    double v = 0.0;
    for (int k = 1; k <= max_mode; ++k)
      v += a[k] * std::cos(k * k0 * x) + b[k] * std::sin(k * k0 * x);
    return v;
  });
}

// Dense differentiation matrix of the trigonometric interpolant (even n):
// D_jk = (pi/L) (-1)^{j-k} cot((j-k) pi / n), zero diagonal.
Eigen::MatrixXd dense_derivative_matrix(const PeriodicGrid& grid) {
  const int n = grid.size();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int d = j - k;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      D(j, k) = (kPi / grid.length()) * sign / std::tan(kPi * d / n);
    }
  }
  return D;
}

double max_abs_diff(const RealField& a, const RealField& b) {
  double out = 0.0;
  for (int k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a[k] - b[k]));
  return out;
}

}  // namespace

TEST_CASE("derivative of a constant vanishes") {
  const GridPtr grid = make_grid(64, 5.0);
  const RealField f(grid, 3.25);
  const RealField df = derivative(f);
  CHECK(norms(df).linf == doctest::Approx(0.0).epsilon(0.0).scale(1.0));
}

TEST_CASE("derivative of the fundamental mode") {
  const double L = 7.0;
  const GridPtr grid = make_grid(128, L);
  const double k = 2.0 * kPi / L;
  const RealField f = sample(grid, [&](double x) { return std::sin(k * x); });
  const RealField expected = sample(grid, [&](double x) { return k * std::cos(k * x); });
  CHECK(max_abs_diff(derivative(f), expected) <= 1e-12 * k);
}

TEST_CASE("derivative matches the dense differentiation-matrix oracle") {
  const GridPtr grid = make_grid(96, 11.0);
  std::mt19937_64 rng(7);
  const RealField f = random_low_mode(grid, 20, rng);
  const Eigen::MatrixXd D = dense_derivative_matrix(*grid);
  Eigen::VectorXd v(f.size());
  for (int k = 0; k < f.size(); ++k) v[k] = f[k];
  const Eigen::VectorXd dv = D * v;
  const RealField df = derivative(f);
  double scale = 0.0, diff = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    scale = std::max(scale, std::abs(dv[k]));
    diff = std::max(diff, std::abs(dv[k] - df[k]));
  }
  CHECK(diff / scale <= 1e-10);
}

TEST_CASE("derivative is linear") {
  const GridPtr grid = make_grid(64, 3.0);
  std::mt19937_64 rng(11);
  const RealField f = random_low_mode(grid, 10, rng);
  const RealField g = random_low_mode(grid, 10, rng);
  RealField combo = f;
  combo *= 2.5;
  axpy(-1.25, g, combo);
  RealField expected = derivative(f);
  expected *= 2.5;
  axpy(-1.25, derivative(g), expected);
  CHECK(max_abs_diff(derivative(combo), expected) <= 1e-12);
}

TEST_CASE("non-finite input is rejected") {
  const GridPtr grid = make_grid(16, 1.0);
  RealField f(grid);
  f[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(derivative(f), "derivative: non-finite field", NumericalError);
}

TEST_CASE("helmholtz fixes constants and eigenfunctions") {
  const double L = 9.0;
  const GridPtr grid = make_grid(64, L);
  const RealField c(grid, -2.0);
  CHECK(max_abs_diff(helmholtz_invert(c), c) <= 1e-14);
  CHECK(max_abs_diff(helmholtz_apply(c), c) <= 1e-14);

  const double k = 2.0 * kPi / L;
  const RealField f = sample(grid, [&](double x) { return std::cos(k * x); });
  RealField scaled = f;
  scaled *= 1.0 / (1.0 + k * k);
  CHECK(max_abs_diff(helmholtz_invert(f), scaled) <= 1e-14);
  RealField amplified = f;
  amplified *= 1.0 + k * k;
  CHECK(max_abs_diff(helmholtz_apply(f), amplified) <= 1e-13);
}

TEST_CASE("helmholtz_invert matches a dense linear solve on a narrow bump") {
  const GridPtr grid = make_grid(128, 20.0);
  // Narrow normalized bump, comfortably band-limited at this resolution.
  RealField m = sample(grid, [&](double x) {
    const double r = (x - 10.0) / 0.9;
    return std::exp(-r * r);
  });
  const double mass = integrate(m);
  m *= 1.0 / mass;

  const int n = grid->size();
  const Eigen::MatrixXd D = dense_derivative_matrix(*grid);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - D * D;
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) rhs[k] = m[k];
  const Eigen::VectorXd dense = A.partialPivLu().solve(rhs);

  const RealField u = helmholtz_invert(m);
  double scale = 0.0, diff = 0.0;
  for (int k = 0; k < n; ++k) {
    scale = std::max(scale, std::abs(dense[k]));
    diff = std::max(diff, std::abs(dense[k] - u[k]));
  }
  CHECK(diff / scale <= 1e-8);
}

TEST_CASE("helmholtz round trip is the identity on band-limited fields") {
  const GridPtr grid = make_grid(128, 6.0);
  std::mt19937_64 rng(23);
  const RealField m = random_low_mode(grid, 30, rng);
  const RealField back = helmholtz_apply(helmholtz_invert(m));
  CHECK(max_abs_diff(back, m) / norms(m).linf <= 1e-10);
}

TEST_CASE("helmholtz_invert of a nonnegative bump is nonnegative") {
  const GridPtr grid = make_grid(256, 30.0);
  const RealField m = sample(grid, [&](double x) {
    const double r = (x - 11.0) / 1.3;
    return 2.0 * std::exp(-r * r);
  });
  const RealField u = helmholtz_invert(m);
  double lowest = 0.0;
  for (int k = 0; k < u.size(); ++k) lowest = std::min(lowest, u[k]);
  CHECK(lowest >= -1e-12);
}

TEST_CASE("integrate: rectangle rule basics") {
  const double L = 4.0;
  const GridPtr grid = make_grid(32, L);
  CHECK(integrate(RealField(grid)) == 0.0);
  CHECK(integrate(RealField(grid, 1.5)) == doctest::Approx(1.5 * L).epsilon(1e-15));
  const RealField s = sample(grid, [&](double x) { return std::sin(2.0 * kPi * x / L); });
  CHECK(std::abs(integrate(s)) <= 1e-12);
}

TEST_CASE("integral of a derivative vanishes by periodicity") {
  const GridPtr grid = make_grid(128, 13.0);
  std::mt19937_64 rng(3);
  const RealField f = random_low_mode(grid, 25, rng);
  CHECK(std::abs(integrate(derivative(f))) <= 1e-10);
}

TEST_CASE("norms: closed forms and the H^2 multiplier oracle") {
  const GridPtr grid = make_grid(128, 2.0 * kPi);
  const RealField zero(grid);
  const FieldNorms z = norms(zero);
  CHECK(z.linf == 0.0);
  CHECK(z.l2 == 0.0);
  CHECK(z.h1 == 0.0);

  const RealField s = sample(grid, [&](double x) { return std::sin(x); });
  CHECK(norms(s).l2 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));

  std::mt19937_64 rng(31);
  const RealField f = random_low_mode(grid, 20, rng);
  // hs(2) equals the L2 norm of (1 - dxx) f: same multiplier, different path.
  CHECK(hs_norm(f, 2.0) == doctest::Approx(norms(helmholtz_apply(f)).l2).epsilon(1e-12));
}

TEST_CASE("dealias keeps low modes and kills the top third") {
  const double L = 2.0 * kPi;
  const GridPtr grid = make_grid(96, L);
  const int cutoff = grid->dealias_cutoff();
  const RealField low = sample(grid, [&](double x) { return std::cos(cutoff * x); });
  CHECK(max_abs_diff(dealias(low), low) <= 1e-12);
  const RealField high = sample(grid, [&](double x) { return std::cos((cutoff + 1) * x); });
  CHECK(norms(dealias(high)).linf <= 1e-12);
}

TEST_CASE("trigonometric interpolant reproduces values and derivatives off-grid") {
  const GridPtr grid = make_grid(128, 5.0);
  const double k = 2.0 * kPi / 5.0;
  const RealField f = sample(grid, [&](double x) { return std::sin(3.0 * k * x) + 0.5 * std::cos(k * x); });
  const TrigInterpolant interp(f);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uniform(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double x = uniform(rng);
    const double expected = std::sin(3.0 * k * x) + 0.5 * std::cos(k * x);
    const double expected_d = 3.0 * k * std::cos(3.0 * k * x) - 0.5 * k * std::sin(k * x);
    double value, deriv;
    interp.eval(x, value, deriv);
    CHECK(value == doctest::Approx(expected).epsilon(1e-11));
    CHECK(deriv == doctest::Approx(expected_d).epsilon(1e-10));
  }
}

TEST_CASE("gaussian filter damps high modes monotonically") {
  const GridPtr grid = make_grid(128, 10.0);
  const RealField f = sample(grid, [&](double x) {
    return std::cos(2.0 * kPi * x / 10.0) + 0.3 * std::cos(24.0 * kPi * x / 10.0);
  });
  const RealField smooth = gaussian_filter(f, 0.5);
  CHECK(hs_norm(smooth, 2.0) < hs_norm(f, 2.0));
  // Mean is preserved (k = 0 symbol is 1).
  CHECK(integrate(smooth) == doctest::Approx(integrate(f)).epsilon(1e-13));
}
