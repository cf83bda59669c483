#include "novikov/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace novikov {
namespace {

// FFTW plan creation is not thread safe; execution via the new-array API is,
// as long as each call supplies its own buffers. Plans are cached per size and
// created with FFTW_UNALIGNED so they accept any heap buffer.
struct PlanSet {
  fftw_plan forward = nullptr;   // r2c
  fftw_plan backward = nullptr;  // c2r
};

PlanSet& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanSet> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> real(n);
  std::vector<std::complex<double>> cplx(n / 2 + 1);
  PlanSet set;
  set.forward = fftw_plan_dft_r2c_1d(n, real.data(),
                                     reinterpret_cast<fftw_complex*>(cplx.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  set.backward = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cplx.data()),
                                      real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!set.forward || !set.backward)
    throw std::runtime_error("spectral: FFTW plan creation failed");
  return cache.emplace(n, set).first->second;
}

std::vector<std::complex<double>> forward(const RealField& f) {
  const int n = f.size();
  std::vector<double> in(f.samples());  // r2c may not preserve input
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plans_for(n).forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

// Consumes the coefficient buffer (c2r overwrites its input).
RealField backward(const GridPtr& grid, std::vector<std::complex<double>>&& coeff) {
  const int n = grid->size();
  RealField out(grid);
  fftw_execute_dft_c2r(plans_for(n).backward,
                       reinterpret_cast<fftw_complex*>(coeff.data()),
                       out.samples().data());
  const double scale = 1.0 / n;
  for (double& v : out.samples()) v *= scale;
  return out;
}

template <typename Symbol>
RealField apply_symbol(const RealField& f, Symbol&& symbol) {
  auto coeff = forward(f);
  const auto& k = f.grid().wavenumbers();
  const int half = f.size() / 2;
  for (int j = 0; j <= half; ++j) coeff[j] *= symbol(k[j], j);
  return backward(f.grid_ptr(), std::move(coeff));
}

}  // namespace

RealField derivative(const RealField& f) {
  require_finite(f, "derivative");
  auto coeff = forward(f);
  const auto& k = f.grid().wavenumbers();
  const int half = f.size() / 2;
  for (int j = 0; j < half; ++j) coeff[j] *= std::complex<double>(0.0, k[j]);
  coeff[half] = 0.0;  // Nyquist zeroed: keeps odd derivatives real and unbiased
  return backward(f.grid_ptr(), std::move(coeff));
}

RealField helmholtz_apply(const RealField& u) {
  require_finite(u, "helmholtz_apply");
  return apply_symbol(u, [](double k, int) { return 1.0 + k * k; });
}

RealField helmholtz_invert(const RealField& m) {
  require_finite(m, "helmholtz_invert");
  return apply_symbol(m, [](double k, int) { return 1.0 / (1.0 + k * k); });
}

RealField dealias(const RealField& f) {
  return low_pass(f, f.grid().dealias_cutoff());
}

RealField low_pass(const RealField& f, int max_mode) {
  return apply_symbol(f, [max_mode](double, int j) { return j <= max_mode ? 1.0 : 0.0; });
}

RealField gaussian_filter(const RealField& f, double sigma) {
  require_finite(f, "gaussian_filter");
  return apply_symbol(f, [sigma](double k, int) { return std::exp(-0.5 * k * k * sigma * sigma); });
}

RealField multiply(const RealField& a, const RealField& b, bool dealias_product) {
  require_same_grid(a, b, "multiply");
  RealField out(a.grid_ptr());
  for (int k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return dealias_product ? dealias(out) : out;
}

double integrate(const RealField& f) {
  double sum = 0.0;
  for (double v : f.samples()) sum += v;
  return sum * f.grid().spacing();
}

FieldNorms norms(const RealField& f) {
  FieldNorms out;
  double sumsq = 0.0;
  for (double v : f.samples()) {
    out.linf = std::max(out.linf, std::abs(v));
    sumsq += v * v;
  }
  out.l2 = std::sqrt(sumsq * f.grid().spacing());
  out.h1 = hs_norm(f, 1.0);
  return out;
}

double hs_norm(const RealField& f, double s) {
  auto coeff = forward(f);
  const auto& k = f.grid().wavenumbers();
  const int n = f.size();
  const int half = n / 2;
  double sum = 0.0;
  for (int j = 0; j <= half; ++j) {
    const double weight = (j == 0 || j == half) ? 1.0 : 2.0;
    sum += weight * std::pow(1.0 + k[j] * k[j], s) * std::norm(coeff[j]);
  }
  return std::sqrt(sum * f.grid().length() / (static_cast<double>(n) * n));
}

std::vector<std::complex<double>> spectrum(const RealField& f) { return forward(f); }

TrigInterpolant::TrigInterpolant(const RealField& f)
    : length_(f.grid().length()), n_(f.size()), coeff_(forward(f)) {
  const double scale = 1.0 / n_;
  double peak = 0.0;
  for (auto& c : coeff_) {
    c *= scale;
    peak = std::max(peak, std::abs(c));
  }
  active_ = n_ / 2;
  const double cutoff = 1e-14 * peak;
  while (active_ > 0 && std::abs(coeff_[active_]) <= cutoff) --active_;
}

double TrigInterpolant::operator()(double x) const {
  double value, unused;
  eval(x, value, unused);
  return value;
}

double TrigInterpolant::deriv(double x) const {
  double unused, derivative;
  eval(x, unused, derivative);
  return derivative;
}

void TrigInterpolant::eval(double x, double& value, double& derivative) const {
  const double k0 = 2.0 * std::numbers::pi / length_;
  const int half = n_ / 2;
  // e^{i k0 x} advanced by recurrence over the modes.
  const std::complex<double> rot(std::cos(k0 * x), std::sin(k0 * x));
  std::complex<double> phase = rot;
  double sum = coeff_[0].real();
  double dsum = 0.0;
  const int top = std::min(active_, half - 1);
  for (int j = 1; j <= top; ++j) {
    const std::complex<double> term = coeff_[j] * phase;
    sum += 2.0 * term.real();
    dsum += -2.0 * (j * k0) * term.imag();  // Re(i k term)
    phase *= rot;
  }
  if (active_ >= half) {
    // Nyquist mode as a pure cosine (its sine vanishes on the nodes); it does
    // not contribute to the derivative, matching derivative()'s convention.
    sum += (coeff_[half] * phase).real();
  }
  value = sum;
  derivative = dsum;
}

}  // namespace novikov
