#pragma once

#include <vector>

#include "novikov/grid.hpp"

namespace novikov {

/// How a state was constructed. Reduction tags drive which monitors and
/// conserved quantities apply; `general` carries no extra structure.
enum class ReductionKind { general, gx, case1, case2 };

const char* to_string(ReductionKind kind);

/// The 2N momentum fields (m_1..m_N, n_1..n_N) at one time. Velocities are
/// never stored: u_i = (1 - dxx)^{-1} m_i is reconstructed on demand so it can
/// not go stale.
struct NovikovState {
  std::vector<RealField> m;
  std::vector<RealField> n;
  double time = 0.0;
  ReductionKind reduction = ReductionKind::general;

  int components() const { return static_cast<int>(m.size()); }
  const PeriodicGrid& grid() const { return m.front().grid(); }
  GridPtr grid_ptr() const { return m.front().grid_ptr(); }
  bool is_finite() const;
  double max_linf() const;  // max over all 2N momentum fields
};

/// Validates that all 2N fields share one grid and are finite.
NovikovState make_state(std::vector<RealField> m, std::vector<RealField> n,
                        double time = 0.0,
                        ReductionKind reduction = ReductionKind::general);

/// Builds the N=1 (GX) or N=2 (case 1 / case 2) embedding of a two-field
/// system from its scalar momenta.
NovikovState make_reduction(ReductionKind kind, const RealField& m0, const RealField& n0,
                            double time = 0.0);

/// The two-field (m, n, u, v) system a tagged state embeds.
struct ReducedView {
  RealField m, n, u, v;
};
ReducedView reduced_view(const NovikovState& s);

/// Time derivative of a state (dm_i/dt, dn_i/dt).
struct Tendency {
  std::vector<RealField> dm;
  std::vector<RealField> dn;
};

/// Velocities and the spectral x-derivatives used by both RHS forms.
struct Reconstruction {
  std::vector<RealField> u, v, ux, vx, mx, nx;
};
Reconstruction reconstruct(const NovikovState& s);

}  // namespace novikov
