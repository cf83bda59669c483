#include "novikov/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "novikov/spectral.hpp"

namespace novikov {
namespace {

RealField speed_field(const NovikovState& s, FlowSpeedKind kind) {
  switch (kind) {
    case FlowSpeedKind::general_a: {
      RealField a(s.grid_ptr());
      for (int j = 0; j < s.components(); ++j) {
        const RealField u = helmholtz_invert(s.m[j]);
        const RealField v = helmholtz_invert(s.n[j]);
        for (int k = 0; k < a.size(); ++k) a[k] += u[k] * v[k];
      }
      return a;
    }
    case FlowSpeedKind::case1_2uv: {
      if (s.reduction != ReductionKind::case1 && s.reduction != ReductionKind::gx)
        throw std::invalid_argument("flow_integrate: case1_2uv needs a case-1 (or gx) state");
      const ReducedView rv = reduced_view(s);
      const double factor = s.reduction == ReductionKind::case1 ? 2.0 : 1.0;
      RealField a(s.grid_ptr());
      for (int k = 0; k < a.size(); ++k) a[k] = factor * rv.u[k] * rv.v[k];
      return a;
    }
    case FlowSpeedKind::case2_u2v2: {
      if (s.reduction != ReductionKind::case2)
        throw std::invalid_argument("flow_integrate: case2_u2v2 needs a case-2 state");
      const ReducedView rv = reduced_view(s);
      RealField a(s.grid_ptr());
      for (int k = 0; k < a.size(); ++k) a[k] = rv.u[k] * rv.u[k] + rv.v[k] * rv.v[k];
      return a;
    }
  }
  throw std::invalid_argument("flow_integrate: unknown speed kind");
}

// Natural periodic cubic spline on uniform nodes; derivative is the spline's
// own derivative so flow and jacobian see one consistent velocity field.
class PeriodicSpline {
 public:
  PeriodicSpline(const RealField& f)
      : n_(f.size()), h_(f.grid().spacing()), length_(f.grid().length()), y_(f.samples()) {
    solve_second_derivatives();
  }

  void eval(double x, double& value, double& derivative) const {
    double xw = std::fmod(x, length_);
    if (xw < 0.0) xw += length_;
    int k = static_cast<int>(xw / h_);
    if (k >= n_) k = n_ - 1;
    const int k1 = (k + 1) % n_;
    const double a = (k + 1) * h_ - xw;  // distance to right node
    const double b = xw - k * h_;        // distance to left node
    const double yk = y_[k], yk1 = y_[k1];
    const double mk = m2_[k], mk1 = m2_[k1];
    value = mk * a * a * a / (6.0 * h_) + mk1 * b * b * b / (6.0 * h_) +
            (yk / h_ - mk * h_ / 6.0) * a + (yk1 / h_ - mk1 * h_ / 6.0) * b;
    derivative = -mk * a * a / (2.0 * h_) + mk1 * b * b / (2.0 * h_) -
                 (yk / h_ - mk * h_ / 6.0) + (yk1 / h_ - mk1 * h_ / 6.0);
  }

 private:
  void solve_second_derivatives() {
    // Cyclic tridiagonal system via Sherman-Morrison on the Thomas algorithm.
    const int n = n_;
    std::vector<double> rhs(n);
    for (int k = 0; k < n; ++k) {
      const double ym = y_[(k + n - 1) % n], y0 = y_[k], yp = y_[(k + 1) % n];
      rhs[k] = 6.0 * (yp - 2.0 * y0 + ym) / (h_ * h_);
    }
    const double diag = 4.0, off = 1.0;
    std::vector<double> b(n, diag);
    const double gamma = -diag;
    b[0] -= gamma;
    b[n - 1] -= off * off / gamma;
    auto thomas = [&](std::vector<double> d) {
      std::vector<double> c(n, off), x(n);
      std::vector<double> bb(b);
      for (int k = 1; k < n; ++k) {
        const double w = off / bb[k - 1];
        bb[k] -= w * c[k - 1];
        d[k] -= w * d[k - 1];
      }
      x[n - 1] = d[n - 1] / bb[n - 1];
      for (int k = n - 2; k >= 0; --k) x[k] = (d[k] - c[k] * x[k + 1]) / bb[k];
      return x;
    };
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = off;
    const std::vector<double> x = thomas(rhs);
    const std::vector<double> z = thomas(u);
    const double factor =
        (x[0] + x[n - 1] * off / gamma) / (1.0 + z[0] + z[n - 1] * off / gamma);
    m2_.resize(n);
    for (int k = 0; k < n; ++k) m2_[k] = x[k] - factor * z[k];
  }

  int n_;
  double h_;
  double length_;
  std::vector<double> y_;
  std::vector<double> m2_;
};

// One speed snapshot, evaluable anywhere with a consistent spatial derivative.
class SpeedSampler {
 public:
  SpeedSampler(const RealField& speed, FlowInterp interp) {
    if (interp == FlowInterp::trigonometric)
      trig_ = std::make_unique<TrigInterpolant>(speed);
    else
      spline_ = std::make_unique<PeriodicSpline>(speed);
  }
  void eval(double x, double& value, double& derivative) const {
    if (trig_)
      trig_->eval(x, value, derivative);
    else
      spline_->eval(x, value, derivative);
  }

 private:
  std::unique_ptr<TrigInterpolant> trig_;
  std::unique_ptr<PeriodicSpline> spline_;
};

}  // namespace

double FlowMap::min_jacobian() const {
  double out = std::numeric_limits<double>::infinity();
  for (double j : jacobian) out = std::min(out, j);
  return out;
}

FlowMap flow_integrate(const StateHistory& history, FlowSpeedKind kind, double t,
                       std::span<const double> seeds, const FlowOptions& opts) {
  if (history.size() < 2)
    throw std::invalid_argument("flow_integrate: history needs at least two snapshots");
  const double t0 = history.front_time();
  const double t1 = history.back_time();
  if (t < t0 - 1e-12 || t > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
    throw std::invalid_argument("flow_integrate: requested time outside stored history");
  if (opts.substeps_per_interval < 1)
    throw std::invalid_argument("flow_integrate: substeps_per_interval must be >= 1");

  FlowMap map;
  map.seeds.assign(seeds.begin(), seeds.end());
  map.positions = map.seeds;
  map.jacobian.assign(seeds.size(), 1.0);
  map.time = t0;

  std::vector<std::unique_ptr<SpeedSampler>> samplers(history.size());
  auto sampler = [&](int i) -> const SpeedSampler& {
    if (!samplers[i])
      samplers[i] =
          std::make_unique<SpeedSampler>(speed_field(history.at(i), kind), opts.interp);
    return *samplers[i];
  };

  const std::size_t count = seeds.size();
  for (int i = 0; i + 1 < history.size() && map.time < t - 1e-14; ++i) {
    const double ta = history.at(i).time;
    const double tb = history.at(i + 1).time;
    if (t <= ta) break;
    const double segment_end = std::min(tb, t);
    if (segment_end <= map.time) continue;
    const SpeedSampler& sa = sampler(i);
    const SpeedSampler& sb = sampler(i + 1);
    const double width = tb - ta;
    // Speed is linear in time inside the interval.
    auto speed_at = [&](double tau, double x, double& value, double& derivative) {
      const double theta = (tau - ta) / width;
      double va, da, vb, db;
      sa.eval(x, va, da);
      sb.eval(x, vb, db);
      value = (1.0 - theta) * va + theta * vb;
      derivative = (1.0 - theta) * da + theta * db;
    };
    const int substeps = opts.substeps_per_interval;
    const double h = (segment_end - map.time) / substeps;
    for (int sub = 0; sub < substeps; ++sub) {
      const double tau = map.time;
      for (std::size_t k = 0; k < count; ++k) {
        double& x = map.positions[k];
        double& J = map.jacobian[k];
        double v1, g1, v2, g2, v3, g3, v4, g4;
        speed_at(tau, x, v1, g1);
        speed_at(tau + 0.5 * h, x + 0.5 * h * v1, v2, g2);
        speed_at(tau + 0.5 * h, x + 0.5 * h * v2, v3, g3);
        speed_at(tau + h, x + h * v3, v4, g4);
        const double j1 = g1 * J;
        const double j2 = g2 * (J + 0.5 * h * j1);
        const double j3 = g3 * (J + 0.5 * h * j2);
        const double j4 = g4 * (J + h * j3);
        x += h / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
        J += h / 6.0 * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
        map.min_jacobian_path = std::min(map.min_jacobian_path, J);
      }
      map.time += h;
    }
  }
  map.time = std::min(map.time, t);
  return map;
}

FlowMap flow_integrate(const StateHistory& history, FlowSpeedKind kind, double t,
                       const FlowOptions& opts) {
  const PeriodicGrid& grid = history.at(0).grid();
  std::vector<double> seeds(grid.size());
  for (int k = 0; k < grid.size(); ++k) seeds[k] = grid.node(k);
  return flow_integrate(history, kind, t, seeds, opts);
}

}  // namespace novikov
