#include "novikov/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "novikov/parallel.hpp"
#include "novikov/spectral.hpp"

namespace novikov {
namespace {

struct SharedProducts {
  Reconstruction rec;
  std::vector<RealField> uv;   // u_j v_j
  std::vector<RealField> uxv;  // u_jx v_j
  std::vector<RealField> uvx;  // u_j v_jx
};

SharedProducts shared_products(const NovikovState& s, const RhsOptions& opt) {
  SharedProducts sp;
  sp.rec = reconstruct(s);
  const int N = s.components();
  sp.uv.resize(N);
  sp.uxv.resize(N);
  sp.uvx.resize(N);
  for (int j = 0; j < N; ++j) {
    sp.uv[j] = multiply(sp.rec.u[j], sp.rec.v[j], opt.dealias);
    sp.uxv[j] = multiply(sp.rec.ux[j], sp.rec.v[j], opt.dealias);
    sp.uvx[j] = multiply(sp.rec.u[j], sp.rec.vx[j], opt.dealias);
  }
  return sp;
}

void check_tendency(const RealField& f, const char* side, int i, const char* where) {
  if (!f.is_finite())
    throw NumericalError(std::string(where) + ": NaN in tendency (component " + side +
                         std::to_string(i + 1) + ")");
}

Tendency rhs_by_form(const NovikovState& s, RhsForm form, const RhsOptions& opt) {
  return form == RhsForm::componentwise ? rhs_componentwise(s, opt) : rhs_transport(s, opt);
}

void add_scaled(NovikovState& s, const Tendency& t, double a) {
  const int N = s.components();
  for (int i = 0; i < N; ++i) {
    axpy(a, t.dm[i], s.m[i]);
    axpy(a, t.dn[i], s.n[i]);
  }
}

double max_advection_speed(const NovikovState& s) {
  const int N = s.components();
  RealField a(s.grid_ptr());
  for (int i = 0; i < N; ++i) {
    const RealField u = helmholtz_invert(s.m[i]);
    const RealField v = helmholtz_invert(s.n[i]);
    for (int k = 0; k < a.size(); ++k) a[k] += u[k] * v[k];
  }
  double out = 0.0;
  for (double x : a.samples()) out = std::max(out, std::abs(x));
  return out;
}

}  // namespace

Tendency rhs_componentwise(const NovikovState& s, const RhsOptions& opt) {
  if (!s.is_finite()) throw NumericalError("rhs_componentwise: non-finite state");
  const int N = s.components();
  const bool d = opt.dealias;
  const SharedProducts sp = shared_products(s, opt);
  const auto& r = sp.rec;

  Tendency out;
  out.dm.assign(N, RealField());
  out.dn.assign(N, RealField());
  parallel_for(0, 2 * N, [&](int idx) {
    const int i = idx % N;
    if (idx < N) {
      RealField dm(s.grid_ptr());
      for (int j = 0; j < N; ++j) {
        axpy(-2.0, multiply(s.m[i], sp.uxv[j], d), dm);
        axpy(-1.0, multiply(s.m[i], sp.uvx[j], d), dm);
        axpy(-1.0, multiply(r.mx[i], sp.uv[j], d), dm);
        axpy(-1.0, multiply(multiply(r.ux[i], r.v[j], d), s.m[j], d), dm);
        axpy(+1.0, multiply(multiply(r.u[i], r.vx[j], d), s.m[j], d), dm);
      }
      check_tendency(dm, "m_", i, "rhs_componentwise");
      out.dm[i] = std::move(dm);
    } else {
      RealField dn(s.grid_ptr());
      for (int j = 0; j < N; ++j) {
        axpy(-2.0, multiply(s.n[i], sp.uvx[j], d), dn);
        axpy(-1.0, multiply(s.n[i], sp.uxv[j], d), dn);
        axpy(-1.0, multiply(r.nx[i], sp.uv[j], d), dn);
        axpy(-1.0, multiply(multiply(r.vx[i], r.u[j], d), s.n[j], d), dn);
        axpy(+1.0, multiply(multiply(r.v[i], r.ux[j], d), s.n[j], d), dn);
      }
      check_tendency(dn, "n_", i, "rhs_componentwise");
      out.dn[i] = std::move(dn);
    }
  });
  return out;
}

TransportForm build_transport(const NovikovState& s, const RhsOptions& opt) {
  if (!s.is_finite()) throw NumericalError("build_transport: non-finite state");
  const int N = s.components();
  const bool d = opt.dealias;
  const SharedProducts sp = shared_products(s, opt);
  const auto& r = sp.rec;

  TransportForm tf;
  tf.a = RealField(s.grid_ptr());
  RealField diag_m(s.grid_ptr());  // sum_j (2 u_jx v_j + u_j v_jx)
  RealField diag_n(s.grid_ptr());  // sum_j (2 u_j v_jx + u_jx v_j)
  for (int j = 0; j < N; ++j) {
    tf.a += sp.uv[j];
    axpy(2.0, sp.uxv[j], diag_m);
    axpy(1.0, sp.uvx[j], diag_m);
    axpy(2.0, sp.uvx[j], diag_n);
    axpy(1.0, sp.uxv[j], diag_n);
  }

  tf.b11.assign(N, std::vector<RealField>(N));
  tf.b22.assign(N, std::vector<RealField>(N));
  parallel_for(0, N, [&](int i) {
    for (int j = 0; j < N; ++j) {
      RealField b11 = multiply(r.u[i], r.vx[j], d) - multiply(r.ux[i], r.v[j], d);
      RealField b22 = multiply(r.v[i], r.ux[j], d) - multiply(r.vx[i], r.u[j], d);
      if (i == j) {
        b11 -= diag_m;
        b22 -= diag_n;
      }
      tf.b11[i][j] = std::move(b11);
      tf.b22[i][j] = std::move(b22);
    }
  });
  return tf;
}

Tendency rhs_transport(const NovikovState& s, const RhsOptions& opt) {
  const int N = s.components();
  const bool d = opt.dealias;
  const TransportForm tf = build_transport(s, opt);

  Tendency out;
  out.dm.assign(N, RealField());
  out.dn.assign(N, RealField());
  parallel_for(0, 2 * N, [&](int idx) {
    const int i = idx % N;
    if (idx < N) {
      RealField dm = multiply(tf.a, derivative(s.m[i]), d);
      dm *= -1.0;
      for (int j = 0; j < N; ++j) axpy(1.0, multiply(tf.b11[i][j], s.m[j], d), dm);
      check_tendency(dm, "m_", i, "rhs_transport");
      out.dm[i] = std::move(dm);
    } else {
      RealField dn = multiply(tf.a, derivative(s.n[i]), d);
      dn *= -1.0;
      for (int j = 0; j < N; ++j) axpy(1.0, multiply(tf.b22[i][j], s.n[j], d), dn);
      check_tendency(dn, "n_", i, "rhs_transport");
      out.dn[i] = std::move(dn);
    }
  });
  return out;
}

StepResult step_rk4(const NovikovState& s, const SimConfig& cfg) {
  const RhsOptions opt{cfg.dealias};
  const double dt = cfg.dt;

  StepResult result;
  result.cfl_exceeded =
      dt * max_advection_speed(s) > cfg.cfl_limit * s.grid().spacing();

  const Tendency k1 = rhs_by_form(s, cfg.rhs_form, opt);
  NovikovState s2 = s;
  add_scaled(s2, k1, 0.5 * dt);
  const Tendency k2 = rhs_by_form(s2, cfg.rhs_form, opt);
  NovikovState s3 = s;
  add_scaled(s3, k2, 0.5 * dt);
  const Tendency k3 = rhs_by_form(s3, cfg.rhs_form, opt);
  NovikovState s4 = s;
  add_scaled(s4, k3, dt);
  const Tendency k4 = rhs_by_form(s4, cfg.rhs_form, opt);

  NovikovState next = s;
  add_scaled(next, k1, dt / 6.0);
  add_scaled(next, k2, dt / 3.0);
  add_scaled(next, k3, dt / 3.0);
  add_scaled(next, k4, dt / 6.0);
  next.time = s.time + dt;

  if (!next.is_finite())
    throw NumericalError("step_rk4: non-finite state after step at t = " +
                         std::to_string(next.time));

  result.state = std::move(next);
  if (result.state.max_linf() > cfg.blowup_linf_cap) result.outcome = StepOutcome::blowup_suspected;
  return result;
}

const char* to_string(Termination t) {
  return t == Termination::reached_t_end ? "t_end" : "blowup_suspected";
}

RunResult run_simulation(const NovikovState& s0, const SimConfig& cfg,
                         const std::vector<Observer>& observers) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > cfg.dt))
    throw std::invalid_argument("run_simulation: need 0 < dt < t_end");
  if (cfg.monitor_stride < 1)
    throw std::invalid_argument("run_simulation: monitor_stride must be positive");
  if (s0.max_linf() >= cfg.blowup_linf_cap)
    throw std::invalid_argument("run_simulation: blowup_linf_cap must exceed the initial sup norm");

  auto notify = [&](const NovikovState& snapshot) {
    for (std::size_t i = 0; i < observers.size(); ++i) {
      try {
        observers[i](snapshot);
      } catch (const std::exception& e) {
        throw std::runtime_error("run_simulation: observer " + std::to_string(i) +
                                 " failed at t = " + std::to_string(snapshot.time) + ": " +
                                 e.what());
      }
    }
  };

  const long long n_steps = std::llround(cfg.t_end / cfg.dt);
  RunResult result;
  NovikovState state = s0;
  notify(state);
  double last_observed = state.time;

  for (long long step = 1; step <= n_steps; ++step) {
    StepResult sr = step_rk4(state, cfg);
    result.cfl_warning = result.cfl_warning || sr.cfl_exceeded;
    state = std::move(sr.state);
    ++result.steps_taken;
    const bool sample = (step % cfg.monitor_stride == 0);
    if (sr.outcome == StepOutcome::blowup_suspected) {
      if (state.time > last_observed) notify(state);
      result.termination = Termination::blowup_suspected;
      result.final_state = std::move(state);
      return result;
    }
    if (sample) {
      notify(state);
      last_observed = state.time;
    }
  }
  result.termination = Termination::reached_t_end;
  result.final_state = std::move(state);
  return result;
}

void StateHistory::append(const NovikovState& s) {
  if (!states_.empty() && !(s.time > states_.back().time))
    throw std::invalid_argument("StateHistory: snapshot times must increase");
  states_.push_back(s);
}

Observer StateHistory::recorder() {
  return [this](const NovikovState& s) { append(s); };
}

}  // namespace novikov
