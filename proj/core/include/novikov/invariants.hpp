#pragma once

#include <limits>
#include <vector>

#include "novikov/state.hpp"

namespace novikov {

/// The three algebraically equal expressions of the GX cross-energy
///   H = int m v dx = int n u dx = int (u v + u_x v_x) dx,
/// each computed independently so callers can assert their mutual agreement.
struct ConservedH {
  double h_mv = 0.0;
  double h_nu = 0.0;
  double h_energy = 0.0;

  double max_spread() const;
};
ConservedH conserved_H(const RealField& m, const RealField& n);

/// H1 = int (u^2 + u_x^2) dx and H2 = int (v^2 + v_x^2) dx (conserved for the
/// case-1 system).
struct H1H2 {
  double h1 = 0.0;
  double h2 = 0.0;
};
H1H2 conserved_H1_H2(const RealField& u, const RealField& v);

/// Per-component grid minima of the momentum fields.
struct SignReport {
  std::vector<double> min_m;
  std::vector<double> min_n;
};
SignReport sign_report(const NovikovState& s);

/// Pointwise minima of u + u_x and u - u_x; both stay nonnegative (to
/// round-off) whenever the generating momentum is nonnegative.
struct OneSidedBounds {
  double min_plus = 0.0;
  double min_minus = 0.0;
};
OneSidedBounds one_sided_bounds(const RealField& u);

/// One sample of the conserved-quantity observer. Quantities that do not
/// apply to the state's reduction tag stay NaN.
struct InvariantRecord {
  double time = 0.0;
  double H = std::numeric_limits<double>::quiet_NaN();
  double H1 = std::numeric_limits<double>::quiet_NaN();
  double H2 = std::numeric_limits<double>::quiet_NaN();
  double h1_norm_u = std::numeric_limits<double>::quiet_NaN();
  double h1_norm_v = std::numeric_limits<double>::quiet_NaN();
  double sign_violation_m = 0.0;  // most negative sample across components, 0 if none
  double sign_violation_n = 0.0;
};
using InvariantSeries = std::vector<InvariantRecord>;

struct H1GrowthFit {
  double rate = 0.0;            // least-squares slope of log ||u||_H1 vs t
  double bound_rate_per_C = 0.0;  // 2 ||m0||_L2 ||n0||_L2 (the Gronwall rate modulo C)
};

/// Fits log h1_norm_u against time. The growth bound's constant is not pinned
/// by the theory, so the returned reference rate carries the norms only.
H1GrowthFit h1_growth_check(const InvariantSeries& series, double m0_l2, double n0_l2);

/// Observer that accumulates an InvariantSeries, flags sign violations
/// relative to the running sup-norm scale, and tracks the worst one-sided
/// bound seen for the reduced velocities.
class InvariantObserver {
 public:
  explicit InvariantObserver(double tol_sign_rel = 1e-8);

  void operator()(const NovikovState& s);

  const InvariantSeries& series() const { return series_; }
  bool sign_violation_flagged() const { return sign_flagged_; }
  /// min over all samples and both reduced velocities of min(u +- u_x);
  /// +inf until the first observation of a tagged state.
  double worst_one_sided() const { return worst_one_sided_; }

 private:
  double tol_sign_rel_;
  bool initialized_ = false;
  std::vector<bool> m_started_nonneg_, n_started_nonneg_;
  bool sign_flagged_ = false;
  double worst_one_sided_ = std::numeric_limits<double>::infinity();
  InvariantSeries series_;
};

}  // namespace novikov
