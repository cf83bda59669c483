#include "novikov/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "novikov/spectral.hpp"

namespace novikov {

double ConservedH::max_spread() const {
  return std::max(std::abs(h_mv - h_nu), std::abs(h_mv - h_energy));
}

ConservedH conserved_H(const RealField& m, const RealField& n) {
  require_same_grid(m, n, "conserved_H");
  const RealField u = helmholtz_invert(m);
  const RealField v = helmholtz_invert(n);
  const RealField ux = derivative(u);
  const RealField vx = derivative(v);
  ConservedH out;
  out.h_mv = integrate(multiply(m, v, false));
  out.h_nu = integrate(multiply(n, u, false));
  out.h_energy = integrate(multiply(u, v, false)) + integrate(multiply(ux, vx, false));
  return out;
}

H1H2 conserved_H1_H2(const RealField& u, const RealField& v) {
  require_same_grid(u, v, "conserved_H1_H2");
  auto energy = [](const RealField& f) {
    const RealField fx = derivative(f);
    return integrate(multiply(f, f, false)) + integrate(multiply(fx, fx, false));
  };
  return {energy(u), energy(v)};
}

SignReport sign_report(const NovikovState& s) {
  SignReport report;
  auto field_min = [](const RealField& f) {
    double out = std::numeric_limits<double>::infinity();
    for (double v : f.samples()) out = std::min(out, v);
    return out;
  };
  for (const auto& f : s.m) report.min_m.push_back(field_min(f));
  for (const auto& f : s.n) report.min_n.push_back(field_min(f));
  return report;
}

OneSidedBounds one_sided_bounds(const RealField& u) {
  const RealField ux = derivative(u);
  OneSidedBounds out{std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  for (int k = 0; k < u.size(); ++k) {
    out.min_plus = std::min(out.min_plus, u[k] + ux[k]);
    out.min_minus = std::min(out.min_minus, u[k] - ux[k]);
  }
  return out;
}

H1GrowthFit h1_growth_check(const InvariantSeries& series, double m0_l2, double n0_l2) {
  H1GrowthFit fit;
  fit.bound_rate_per_C = 2.0 * m0_l2 * n0_l2;
  std::vector<double> t, y;
  for (const auto& rec : series) {
    if (std::isfinite(rec.h1_norm_u) && rec.h1_norm_u > 0.0) {
      t.push_back(rec.time);
      y.push_back(std::log(rec.h1_norm_u));
    }
  }
  if (t.size() < 2) return fit;
  double tbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tbar += t[i];
    ybar += y[i];
  }
  tbar /= t.size();
  ybar /= t.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - tbar) * (y[i] - ybar);
    den += (t[i] - tbar) * (t[i] - tbar);
  }
  fit.rate = den > 0.0 ? num / den : 0.0;
  return fit;
}

InvariantObserver::InvariantObserver(double tol_sign_rel) : tol_sign_rel_(tol_sign_rel) {}

void InvariantObserver::operator()(const NovikovState& s) {
  InvariantRecord rec;
  rec.time = s.time;

  const SignReport report = sign_report(s);
  if (!initialized_) {
    for (double v : report.min_m) m_started_nonneg_.push_back(v >= 0.0);
    for (double v : report.min_n) n_started_nonneg_.push_back(v >= 0.0);
    initialized_ = true;
  }
  const double scale = std::max(s.max_linf(), 1e-300);
  for (std::size_t i = 0; i < report.min_m.size(); ++i) {
    rec.sign_violation_m = std::min(rec.sign_violation_m, std::min(0.0, report.min_m[i]));
    if (m_started_nonneg_[i] && report.min_m[i] < -tol_sign_rel_ * scale) sign_flagged_ = true;
  }
  for (std::size_t i = 0; i < report.min_n.size(); ++i) {
    rec.sign_violation_n = std::min(rec.sign_violation_n, std::min(0.0, report.min_n[i]));
    if (n_started_nonneg_[i] && report.min_n[i] < -tol_sign_rel_ * scale) sign_flagged_ = true;
  }

  if (s.reduction != ReductionKind::general) {
    const ReducedView rv = reduced_view(s);
    rec.h1_norm_u = hs_norm(rv.u, 1.0);
    rec.h1_norm_v = hs_norm(rv.v, 1.0);
    if (s.reduction == ReductionKind::gx) {
      rec.H = conserved_H(rv.m, rv.n).h_mv;
    }
    if (s.reduction == ReductionKind::case1) {
      const H1H2 h = conserved_H1_H2(rv.u, rv.v);
      rec.H1 = h.h1;
      rec.H2 = h.h2;
    }
    const OneSidedBounds bu = one_sided_bounds(rv.u);
    const OneSidedBounds bv = one_sided_bounds(rv.v);
    worst_one_sided_ = std::min({worst_one_sided_, bu.min_plus, bu.min_minus, bv.min_plus,
                                 bv.min_minus});
  }
  series_.push_back(rec);
}

}  // namespace novikov
