#pragma once

#include <span>
#include <vector>

#include "novikov/dynamics.hpp"

namespace novikov {

/// Which advection speed generates the characteristic flow dPhi/dt = speed(t, Phi):
///   general_a   - a = sum_j u_j v_j (any state)
///   case1_2uv   - 2 u v of the embedded two-field system (case-1 tag)
///   case2_u2v2  - u^2 + v^2 of the embedded two-field system (case-2 tag)
/// On tagged states the case speeds coincide with general_a.
enum class FlowSpeedKind { general_a, case1_2uv, case2_u2v2 };

/// Positions Phi(t, x_k) on the covering line (never wrapped) and the
/// simultaneously integrated jacobian Phi_x, which solves
/// dJ/dt = (speed)_x(t, Phi) J and stays positive while the solution is classical.
struct FlowMap {
  std::vector<double> seeds;
  std::vector<double> positions;
  std::vector<double> jacobian;
  double time = 0.0;
  // Smallest jacobian seen at any substep of the integration, all seeds.
  double min_jacobian_path = 1.0;

  double min_jacobian() const;
};

enum class FlowInterp { trigonometric, cubic_spline };

struct FlowOptions {
  FlowInterp interp = FlowInterp::trigonometric;
  int substeps_per_interval = 1;  // RK4 substeps between stored history samples
};

/// Integrates the flow from the first stored time to t, sampling the speed by
/// interpolation in space and linearly in time between stored snapshots.
/// Requesting t outside the stored history is an error.
FlowMap flow_integrate(const StateHistory& history, FlowSpeedKind kind, double t,
                       std::span<const double> seeds, const FlowOptions& opts = {});

/// Seeds at every grid node.
FlowMap flow_integrate(const StateHistory& history, FlowSpeedKind kind, double t,
                       const FlowOptions& opts = {});

}  // namespace novikov
