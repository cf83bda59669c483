#include "novikov/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace novikov {
namespace {

struct BumpValues {
  double psi = 0.0, dpsi = 0.0, ddpsi = 0.0;  // derivatives in r
};

BumpValues bump(double r) {
  BumpValues out;
  const double r2 = r * r;
  if (r2 >= 1.0) return out;
  const double g = 1.0 - r2;
  const double psi = std::exp(1.0 - 1.0 / g);
  const double a = -2.0 * r / (g * g);  // psi'/psi
  out.psi = psi;
  out.dpsi = psi * a;
  out.ddpsi = psi * (a * a - 2.0 / (g * g) - 8.0 * r2 / (g * g * g));
  return out;
}

struct PhiValues {
  double phi = 0.0, phi_x = 0.0, phi_xx = 0.0, phi_t = 0.0;
};

class TestEvaluator {
 public:
  TestEvaluator(const WeakTestFunction& test, PeakonFlavor flavor, double length)
      : test_(test), flavor_(flavor), length_(length) {}

  PhiValues operator()(double t, double x) const {
    double d = x - test_.space.center;
    if (flavor_ == PeakonFlavor::periodic_unit) {
      d = d - std::round(d);  // displacement on the circle, in [-1/2, 1/2)
    }
    const double w = test_.space.width;
    const BumpValues b = bump(d / w);
    const TimeProfile& tp = test_.time;
    const double a = tp.a0 + tp.a1 * std::sin(tp.omega * t + tp.phase);
    const double at = tp.a1 * tp.omega * std::cos(tp.omega * t + tp.phase);
    PhiValues out;
    out.phi = a * b.psi;
    out.phi_x = a * b.dpsi / w;
    out.phi_xx = a * b.ddpsi / (w * w);
    out.phi_t = at * b.psi;
    return out;
  }

 private:
  WeakTestFunction test_;
  PeakonFlavor flavor_;
  double length_;
};

template <typename F>
double simpson(double a, double b, int panels, F&& f) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// One smooth piece of the integrated-by-parts peak integrand
//   F = -4 E^2 E_x phi - (1/2) E_x^3 phi + (3/2) E E_x^2 phi_x + E^2 E_x phi_xx
// with the profile branch fixed across the piece.
class PieceIntegrand {
 public:
  PieceIntegrand(PeakonFlavor flavor, double peak, double branch_ref)
      : flavor_(flavor), peak_(peak) {
    if (flavor == PeakonFlavor::line_truncated) {
      sign_ = branch_ref >= peak ? 1.0 : -1.0;
    } else {
      shift_ = std::floor(branch_ref - peak);
    }
  }

  void profile(double x, double& e, double& ex) const {
    if (flavor_ == PeakonFlavor::line_truncated) {
      e = std::exp(-sign_ * (x - peak_));
      ex = -sign_ * e;
    } else {
      const double xi = (x - peak_ - shift_) - 0.5;
      e = std::cosh(xi);
      ex = std::sinh(xi);
    }
  }

  double operator()(double x, const PhiValues& phi) const {
    double e, ex;
    profile(x, e, ex);
    return -4.0 * e * e * ex * phi.phi - 0.5 * ex * ex * ex * phi.phi +
           1.5 * e * ex * ex * phi.phi_x + e * e * ex * phi.phi_xx;
  }

 private:
  PeakonFlavor flavor_;
  double peak_;
  double sign_ = 1.0;
  double shift_ = 0.0;
};

// Integral of F over the test support, split at the crest when it lies inside.
double peak_integral(const TestEvaluator& phi, const WeakTestFunction& test,
                     PeakonFlavor flavor, double t, double peak, int panels) {
  const double a = test.space.center - test.space.width;
  const double b = test.space.center + test.space.width;

  std::vector<double> cuts{a, b};
  if (flavor == PeakonFlavor::line_truncated) {
    if (peak > a && peak < b) cuts.push_back(peak);
  } else {
    // Crest images peak + k inside [a, b] (support width < 1 so at most two cuts).
    for (double img = peak + std::ceil(a - peak); img < b; img += 1.0)
      if (img > a) cuts.push_back(img);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo < 1e-15) continue;
    const PieceIntegrand f(flavor, peak, 0.5 * (lo + hi));
    total += simpson(lo, hi, panels, [&](double x) { return f(x, phi(t, x)); });
  }
  return total;
}

}  // namespace

PeakonHistory make_peakon_history(const PeakonSpec& spec, double t_end, double domain_length,
                                  double speed_factor) {
  PeakonHistory hist;
  hist.spec = spec;
  hist.speed = speed_factor * peakon_speed(spec);
  hist.t_end = t_end;
  hist.domain_length = spec.flavor == PeakonFlavor::periodic_unit ? 1.0 : domain_length;
  return hist;
}

TestFunctionSet make_test_set(const PeakonHistory& hist, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TestFunctionSet set;
  const double T = hist.t_end;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    WeakTestFunction test;
    if (hist.spec.flavor == PeakonFlavor::line_truncated) {
      const double s0 = hist.spec.x0;
      const double s1 = hist.spec.x0 + hist.speed * T;
      const double lo = std::min(s0, s1) - 3.0;
      const double hi = std::max(s0, s1) + 3.0;
      test.space.width = 0.8 + 1.7 * unit(rng);
      const double margin = test.space.width + 0.1;
      const double c = lo + (hi - lo) * unit(rng);
      test.space.center = std::clamp(c, margin, hist.domain_length - margin);
    } else {
      test.space.width = 0.08 + 0.17 * unit(rng);
      test.space.center = unit(rng);
    }
    test.time.a0 = 0.5 + unit(rng);
    test.time.a1 = -0.5 + unit(rng);
    test.time.omega = (0.5 + 2.5 * unit(rng)) * 3.141592653589793 / std::max(T, 1e-12);
    test.time.phase = 6.283185307179586 * unit(rng);
    set.tests.push_back(test);
  }
  return set;
}

double WeakResidualReport::max_abs() const {
  double out = 0.0;
  for (const auto& row : residuals)
    for (double r : row) out = std::max(out, std::abs(r));
  return out;
}

WeakResidualReport weak_residual(const PeakonHistory& hist, const TestFunctionSet& tests) {
  const PeakonSpec& spec = hist.spec;
  if (spec.n_components < 1 || static_cast<int>(spec.p.size()) != spec.n_components ||
      static_cast<int>(spec.q.size()) != spec.n_components)
    throw std::invalid_argument("weak_residual: malformed peakon spec");
  const PeakonFlavor flavor = spec.flavor;
  const double L = hist.domain_length;
  const double T = hist.t_end;

  if (flavor == PeakonFlavor::line_truncated) {
    for (const auto& test : tests.tests) {
      if (test.space.center - test.space.width <= 0.0 ||
          test.space.center + test.space.width >= L)
        throw std::invalid_argument(
            "weak_residual: test support wraps the periodic seam; reposition the test");
    }
  }

  double pq_sum = 0.0;
  for (int j = 0; j < spec.n_components; ++j) pq_sum += spec.p[j] * spec.q[j];
  // Weight of the point measure carried by each momentum component.
  const double mu_unit = flavor == PeakonFlavor::line_truncated ? 2.0 : 2.0 * std::sinh(0.5);

  double amp_floor = 1e-300;
  for (int i = 0; i < spec.n_components; ++i)
    amp_floor += mu_unit * (std::abs(spec.p[i]) + std::abs(spec.q[i])) +
                 std::abs(pq_sum) * (std::abs(spec.p[i]) + std::abs(spec.q[i]));

  auto peak_at = [&](double t) { return spec.x0 + hist.speed * t; };

  WeakResidualReport report;
  for (const auto& test : tests.tests) {
    const TestEvaluator phi(test, flavor, L);

    // Per-time quantities shared by every component equation.
    int slices = tests.time_slices;
    if (slices % 2 != 0) ++slices;
    const double ht = T / slices;
    std::vector<double> phi_t_at_peak(slices + 1), phi_integral(slices + 1);
    for (int r = 0; r <= slices; ++r) {
      const double t = r * ht;
      const double s = peak_at(t);
      phi_t_at_peak[r] = phi(t, s).phi_t;
      phi_integral[r] = peak_integral(phi, test, flavor, t, s, tests.space_panels);
    }
    auto simpson_sum = [&](auto&& term) {
      double sum = term(0) + term(slices);
      for (int r = 1; r < slices; ++r) sum += (r % 2 == 1 ? 4.0 : 2.0) * term(r);
      return sum * ht / 3.0;
    };

    std::vector<double> row;
    for (int side = 0; side < 2; ++side) {
      const auto& amp = side == 0 ? spec.p : spec.q;
      for (int i = 0; i < spec.n_components; ++i) {
        const double mu = mu_unit * amp[i];
        const double coeff = amp[i] * pq_sum;
        const double interior =
            simpson_sum([&](int r) { return mu * phi_t_at_peak[r] + coeff * phi_integral[r]; });
        const double boundary =
            mu * (phi(T, peak_at(T)).phi - phi(0.0, peak_at(0.0)).phi);
        const double scale =
            simpson_sum([&](int r) {
              return std::abs(mu * phi_t_at_peak[r]) + std::abs(coeff * phi_integral[r]);
            }) +
            std::abs(mu) * (std::abs(phi(T, peak_at(T)).phi) + std::abs(phi(0.0, peak_at(0.0)).phi));
        row.push_back((interior - boundary) / std::max(scale, amp_floor));
      }
    }
    report.residuals.push_back(std::move(row));
  }
  return report;
}

}  // namespace novikov
