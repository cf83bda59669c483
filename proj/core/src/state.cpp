#include "novikov/state.hpp"

#include <algorithm>

#include "novikov/spectral.hpp"

namespace novikov {

const char* to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::general: return "general";
    case ReductionKind::gx: return "gx";
    case ReductionKind::case1: return "case1";
    case ReductionKind::case2: return "case2";
  }
  return "unknown";
}

bool NovikovState::is_finite() const {
  for (const auto& f : m)
    if (!f.is_finite()) return false;
  for (const auto& f : n)
    if (!f.is_finite()) return false;
  return true;
}

double NovikovState::max_linf() const {
  double out = 0.0;
  for (const auto& f : m)
    for (double v : f.samples()) out = std::max(out, std::abs(v));
  for (const auto& f : n)
    for (double v : f.samples()) out = std::max(out, std::abs(v));
  return out;
}

NovikovState make_state(std::vector<RealField> m, std::vector<RealField> n, double time,
                        ReductionKind reduction) {
  if (m.empty() || m.size() != n.size())
    throw std::invalid_argument("make_state: need equal, nonzero counts of m and n fields");
  for (std::size_t i = 1; i < m.size(); ++i) require_same_grid(m[0], m[i], "make_state");
  for (const auto& f : n) require_same_grid(m[0], f, "make_state");
  NovikovState s{std::move(m), std::move(n), time, reduction};
  if (!s.is_finite()) throw NumericalError("make_state: non-finite field");
  return s;
}

NovikovState make_reduction(ReductionKind kind, const RealField& m0, const RealField& n0,
                            double time) {
  require_same_grid(m0, n0, "make_reduction");
  switch (kind) {
    case ReductionKind::gx:
      return make_state({m0}, {n0}, time, ReductionKind::gx);
    case ReductionKind::case1:
      // m1 = n2 = m, m2 = n1 = n
      return make_state({m0, n0}, {n0, m0}, time, ReductionKind::case1);
    case ReductionKind::case2:
      // m1 = n1 = m, m2 = n2 = n
      return make_state({m0, n0}, {m0, n0}, time, ReductionKind::case2);
    default:
      throw std::invalid_argument("make_reduction: kind must be gx, case1 or case2");
  }
}

ReducedView reduced_view(const NovikovState& s) {
  switch (s.reduction) {
    case ReductionKind::gx:
      return {s.m[0], s.n[0], helmholtz_invert(s.m[0]), helmholtz_invert(s.n[0])};
    case ReductionKind::case1:
    case ReductionKind::case2:
      // Both cases read (m, n) = (m_1, m_2) and (u, v) = (u_1, u_2).
      return {s.m[0], s.m[1], helmholtz_invert(s.m[0]), helmholtz_invert(s.m[1])};
    default:
      throw std::invalid_argument("reduced_view: state carries no reduction tag");
  }
}

Reconstruction reconstruct(const NovikovState& s) {
  const int N = s.components();
  Reconstruction r;
  r.u.resize(N);
  r.v.resize(N);
  r.ux.resize(N);
  r.vx.resize(N);
  r.mx.resize(N);
  r.nx.resize(N);
  for (int i = 0; i < N; ++i) {
    r.u[i] = helmholtz_invert(s.m[i]);
    r.v[i] = helmholtz_invert(s.n[i]);
    r.ux[i] = derivative(r.u[i]);
    r.vx[i] = derivative(r.v[i]);
    r.mx[i] = derivative(s.m[i]);
    r.nx[i] = derivative(s.n[i]);
  }
  return r;
}

}  // namespace novikov
