#pragma once

#include <complex>
#include <vector>

#include "novikov/grid.hpp"

namespace novikov {

/// Fourier-collocation operators on a PeriodicGrid. All routines keep the
/// spectrum Hermitian (real-to-complex transforms), so output fields are real
/// by construction. Everything here is a pure function of its inputs and safe
/// to call concurrently; transform scratch buffers are confined per call.

/// Spectral d/dx. Exact for trigonometric polynomials below the Nyquist mode;
/// the Nyquist mode itself is zeroed (odd-derivative convention).
RealField derivative(const RealField& f);

/// (1 - d^2/dx^2) f via the Fourier symbol 1 + k^2.
RealField helmholtz_apply(const RealField& u);

/// (1 - d^2/dx^2)^{-1} m via the symbol 1/(1 + k^2); preserves the mean.
RealField helmholtz_invert(const RealField& m);

/// Zero all modes with |j| > n/3 (the 2/3 dealiasing rule).
RealField dealias(const RealField& f);

/// Zero all modes with |j| > max_mode (band limiting, used to build test states).
RealField low_pass(const RealField& f, int max_mode);

/// Periodic Gaussian smoothing via the symbol exp(-k^2 sigma^2 / 2).
RealField gaussian_filter(const RealField& f, double sigma);

/// Pointwise product; when dealias_product is set the result is 2/3-filtered.
RealField multiply(const RealField& a, const RealField& b, bool dealias_product);

/// Rectangle rule spacing * sum(samples); spectrally exact for smooth periodic
/// integrands.
double integrate(const RealField& f);

struct FieldNorms {
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

/// sup norm from samples; L2 from the rectangle rule; H1 via the Fourier
/// multiplier (1 + k^2)^{1/2}.
FieldNorms norms(const RealField& f);

/// H^s norm via the multiplier (1 + k^2)^{s/2}.
double hs_norm(const RealField& f, double s);

/// Forward real-to-complex spectrum (n/2 + 1 unnormalized coefficients).
std::vector<std::complex<double>> spectrum(const RealField& f);

/// Evaluates the trigonometric interpolant of a field at arbitrary points.
/// Construction costs one transform; evaluation is O(modes) per point.
/// Trailing modes below 1e-14 of the spectral peak are dropped, which leaves
/// smooth fields with far fewer active modes than n/2.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const RealField& f);

  double operator()(double x) const;

  /// Derivative of the interpolant (Nyquist mode dropped, same convention as
  /// derivative()).
  double deriv(double x) const;

  /// Value and derivative in one pass over the modes.
  void eval(double x, double& value, double& derivative) const;

 private:
  double length_ = 1.0;
  int n_ = 0;
  int active_ = 0;                           // modes kept after tail truncation
  std::vector<std::complex<double>> coeff_;  // normalized, j = 0..n/2
};

}  // namespace novikov
