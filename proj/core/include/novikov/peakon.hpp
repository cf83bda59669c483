#pragma once

#include <span>
#include <vector>

#include "novikov/state.hpp"

namespace novikov {

enum class PeakonFlavor { line_truncated, periodic_unit };

/// A single-peak traveling wave u_i = p_i E(x - s(t)), v_i = q_i E(x - s(t)).
/// E is exp(-|.|) on the (truncated) line or cosh(frac(.) - 1/2) on the unit
/// circle.
struct PeakonSpec {
  int n_components = 1;
  std::vector<double> p;
  std::vector<double> q;
  double x0 = 0.0;
  PeakonFlavor flavor = PeakonFlavor::line_truncated;
};

/// Traveling-wave speed: sum_j p_j q_j on the line, cosh^2(1/2) * sum_j p_j q_j
/// for the period-1 profile.
double peakon_speed(const PeakonSpec& spec);

/// Profile E(xi) and its one-sided derivative away from the crest; xi = x - s.
/// For the periodic flavor `length` must be 1.
double peakon_profile(PeakonFlavor flavor, double length, double xi);
double peakon_profile_deriv(PeakonFlavor flavor, double length, double xi);

struct PeakonFields {
  std::vector<RealField> u;
  std::vector<RealField> v;
};

/// Exact pointwise samples at time t, peak at x0 + c t reduced modulo the
/// domain. line_truncated requires the domain long enough that the truncated
/// tail exp(-L/2) is negligible.
PeakonFields sample_peakon(const PeakonSpec& spec, const GridPtr& grid, double t);

/// Smooth momentum surrogate for the solver: m_i = (1 - dxx)(G_sigma * u_i)
/// with a periodic Gaussian of width sigma >= 2 dx. Tagged gx when N = 1.
NovikovState mollified_peakon_momentum(const PeakonSpec& spec, const GridPtr& grid, double t,
                                       double sigma);

/// Crest trajectory extracted per frame by argmax with quadratic sub-grid
/// refinement, unwrapped modulo the domain, plus the least-squares speed.
struct PeakTrack {
  std::vector<double> times;
  std::vector<double> positions;
  double fitted_speed = 0.0;
};
PeakTrack track_peak(std::span<const double> times, std::span<const RealField> frames);

}  // namespace novikov
