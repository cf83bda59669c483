#include "novikov/peakon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "novikov/spectral.hpp"

namespace novikov {
namespace {

void validate_spec(const PeakonSpec& spec) {
  if (spec.n_components < 1) throw std::invalid_argument("PeakonSpec: n_components must be >= 1");
  if (static_cast<int>(spec.p.size()) != spec.n_components ||
      static_cast<int>(spec.q.size()) != spec.n_components)
    throw std::invalid_argument("PeakonSpec: p and q must have n_components entries");
}

double wrap_centered(double xi, double length) {
  double y = std::fmod(xi, length);
  if (y < -0.5 * length) y += length;
  if (y >= 0.5 * length) y -= length;
  return y;
}

}  // namespace

double peakon_speed(const PeakonSpec& spec) {
  validate_spec(spec);
  double c = 0.0;
  for (int j = 0; j < spec.n_components; ++j) c += spec.p[j] * spec.q[j];
  if (spec.flavor == PeakonFlavor::periodic_unit) {
    const double ch = std::cosh(0.5);
    c *= ch * ch;
  }
  return c;
}

double peakon_profile(PeakonFlavor flavor, double length, double xi) {
  if (flavor == PeakonFlavor::line_truncated) {
    return std::exp(-std::abs(wrap_centered(xi, length)));
  }
  const double frac = xi - std::floor(xi);  // length is 1 for the periodic flavor
  return std::cosh(frac - 0.5);
}

double peakon_profile_deriv(PeakonFlavor flavor, double length, double xi) {
  if (flavor == PeakonFlavor::line_truncated) {
    const double y = wrap_centered(xi, length);
    return y >= 0.0 ? -std::exp(-y) : std::exp(y);
  }
  const double frac = xi - std::floor(xi);
  return std::sinh(frac - 0.5);
}

PeakonFields sample_peakon(const PeakonSpec& spec, const GridPtr& grid, double t) {
  validate_spec(spec);
  const double L = grid->length();
  if (spec.flavor == PeakonFlavor::periodic_unit) {
    if (std::abs(L - 1.0) > 1e-12)
      throw std::invalid_argument("sample_peakon: periodic_unit flavor requires length 1");
  } else if (std::exp(-0.5 * L) > 1e-6) {
    throw std::invalid_argument(
        "sample_peakon: domain too short for the line-truncated flavor");
  }

  const double s = spec.x0 + peakon_speed(spec) * t;
  RealField profile(grid);
  for (int k = 0; k < grid->size(); ++k)
    profile[k] = peakon_profile(spec.flavor, L, grid->node(k) - s);

  PeakonFields out;
  for (int i = 0; i < spec.n_components; ++i) {
    RealField u = profile;
    u *= spec.p[i];
    RealField v = profile;
    v *= spec.q[i];
    out.u.push_back(std::move(u));
    out.v.push_back(std::move(v));
  }
  return out;
}

NovikovState mollified_peakon_momentum(const PeakonSpec& spec, const GridPtr& grid, double t,
                                       double sigma) {
  if (sigma < 2.0 * grid->spacing())
    throw std::invalid_argument("mollified_peakon_momentum: under-resolved mollifier");
  const PeakonFields fields = sample_peakon(spec, grid, t);
  std::vector<RealField> m, n;
  for (int i = 0; i < spec.n_components; ++i) {
    m.push_back(helmholtz_apply(gaussian_filter(fields.u[i], sigma)));
    n.push_back(helmholtz_apply(gaussian_filter(fields.v[i], sigma)));
  }
  const ReductionKind tag =
      spec.n_components == 1 ? ReductionKind::gx : ReductionKind::general;
  return make_state(std::move(m), std::move(n), t, tag);
}

PeakTrack track_peak(std::span<const double> times, std::span<const RealField> frames) {
  if (times.size() != frames.size())
    throw std::invalid_argument("track_peak: times and frames must pair up");
  if (frames.size() < 2) throw std::invalid_argument("track_peak: need at least two frames");

  PeakTrack track;
  const PeriodicGrid& grid = frames[0].grid();
  const double L = grid.length();
  const int n = grid.size();

  double prev = 0.0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const RealField& u = frames[f];
    int kmax = 0;
    for (int k = 1; k < n; ++k)
      if (u[k] > u[kmax]) kmax = k;
    // Quadratic refinement through the three nodes around the argmax.
    const double ym = u[(kmax + n - 1) % n];
    const double y0 = u[kmax];
    const double yp = u[(kmax + 1) % n];
    const double denom = ym - 2.0 * y0 + yp;
    double delta = 0.0;
    if (std::abs(denom) > 1e-300) delta = 0.5 * (ym - yp) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    double pos = grid.node(kmax) + delta * grid.spacing();
    if (f == 0) {
      prev = pos;
    } else {
      // Unwrap: choose the image closest to the previous position.
      double jump = std::fmod(pos - prev, L);
      if (jump < -0.5 * L) jump += L;
      if (jump >= 0.5 * L) jump -= L;
      prev += jump;
    }
    track.times.push_back(times[f]);
    track.positions.push_back(prev);
  }

  double tbar = 0.0, pbar = 0.0;
  const std::size_t count = track.times.size();
  for (std::size_t i = 0; i < count; ++i) {
    tbar += track.times[i];
    pbar += track.positions[i];
  }
  tbar /= count;
  pbar /= count;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    num += (track.times[i] - tbar) * (track.positions[i] - pbar);
    den += (track.times[i] - tbar) * (track.times[i] - tbar);
  }
  track.fitted_speed = den > 0.0 ? num / den : 0.0;
  return track;
}

}  // namespace novikov
