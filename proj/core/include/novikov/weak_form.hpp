#pragma once

#include <cstdint>
#include <vector>

#include "novikov/peakon.hpp"

namespace novikov {

/// Smooth compactly supported bump psi((x - center)/width) with
/// psi(r) = exp(1 - 1/(1 - r^2)) on |r| < 1 and 0 outside; vanishes with all
/// derivatives at the support endpoints.
struct SpaceBump {
  double center = 0.0;
  double width = 1.0;
};

/// C^1 time factor a0 + a1 sin(omega t + phase) on [0, T].
struct TimeProfile {
  double a0 = 1.0;
  double a1 = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

struct WeakTestFunction {
  SpaceBump space;
  TimeProfile time;
};

struct TestFunctionSet {
  std::vector<WeakTestFunction> tests;
  int space_panels = 512;  // composite-Simpson panels per smooth piece
  int time_slices = 400;   // composite-Simpson slices over [0, T]
};

/// Analytic single-peak trajectory sampled on [0, t_end]: profiles from the
/// spec, peak at x0 + speed * t. The speed defaults to the traveling-wave
/// formula; overriding it yields the wrong-speed control histories.
struct PeakonHistory {
  PeakonSpec spec;
  double speed = 0.0;
  double t_end = 1.0;
  double domain_length = 1.0;  // truncation window for the line flavor; 1 for periodic
};

PeakonHistory make_peakon_history(const PeakonSpec& spec, double t_end, double domain_length,
                                  double speed_factor = 1.0);

/// Randomized family of admissible test functions. Spatial supports cover the
/// peak trajectory and, for the line flavor, stay clear of the periodic seam.
TestFunctionSet make_test_set(const PeakonHistory& hist, int count, std::uint64_t seed);

/// Normalized gaps in the space-time integral identity of the weak-solution
/// definition, one value per test function and component equation
/// (m_1..m_N then n_1..n_N).
struct WeakResidualReport {
  std::vector<std::vector<double>> residuals;
  double max_abs() const;
};

WeakResidualReport weak_residual(const PeakonHistory& hist, const TestFunctionSet& tests);

}  // namespace novikov
