#pragma once

#include <functional>
#include <vector>

#include "novikov/state.hpp"

namespace novikov {

struct RhsOptions {
  bool dealias = true;  // 2/3-rule filter on every pointwise product
};

/// Direct discrete realization of the componentwise momentum equations
///   dm_i/dt = sum_j (-2 m_i u_jx v_j - m_i u_j v_jx - m_ix u_j v_j
///                    - u_ix m_j v_j + u_i m_j v_jx)
/// and the symmetric n-equations, with u_j, v_j reconstructed spectrally.
Tendency rhs_componentwise(const NovikovState& s, const RhsOptions& opt = {});

/// The advection speed a = sum_j u_j v_j and the block-diagonal matrix B of
/// the transport form M_t + a M_x = B M.
struct TransportForm {
  RealField a;
  std::vector<std::vector<RealField>> b11;  // N x N, entries u_i v_jx - u_ix v_j minus the diagonal sum
  std::vector<std::vector<RealField>> b22;
};
TransportForm build_transport(const NovikovState& s, const RhsOptions& opt = {});

/// Same dynamics evaluated through the transport form: -a M_x + B M. This is
/// a structurally independent second route and the module's master oracle
/// against rhs_componentwise.
Tendency rhs_transport(const NovikovState& s, const RhsOptions& opt = {});

enum class RhsForm { componentwise, transport };

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  int monitor_stride = 10;
  double blowup_linf_cap = 1e6;
  RhsForm rhs_form = RhsForm::componentwise;
  double cfl_limit = 0.9;  // warn when dt * max|a| / dx exceeds this
};

enum class StepOutcome { advanced, blowup_suspected };

struct StepResult {
  StepOutcome outcome = StepOutcome::advanced;
  NovikovState state;  // the advanced state; on blow-up suspicion, the last finite one
  bool cfl_exceeded = false;
};

/// One classical RK4 step. Exceeding blowup_linf_cap is a normal terminal
/// outcome, not an error; a non-finite state raises NumericalError.
StepResult step_rk4(const NovikovState& s, const SimConfig& cfg);

enum class Termination { reached_t_end, blowup_suspected };

const char* to_string(Termination t);

using Observer = std::function<void(const NovikovState&)>;

struct RunResult {
  Termination termination = Termination::reached_t_end;
  NovikovState final_state;
  int steps_taken = 0;
  bool cfl_warning = false;
};

/// Fixed-step loop; observers fire on the initial state and after every
/// monitor_stride-th step (plus the terminal state of a capped run).
RunResult run_simulation(const NovikovState& s0, const SimConfig& cfg,
                         const std::vector<Observer>& observers);

/// Time-indexed storage of state snapshots (typically at monitor_stride
/// resolution) for characteristic-flow integration.
class StateHistory {
 public:
  void append(const NovikovState& s);
  int size() const { return static_cast<int>(states_.size()); }
  bool empty() const { return states_.empty(); }
  double front_time() const { return states_.front().time; }
  double back_time() const { return states_.back().time; }
  const NovikovState& at(int i) const { return states_[i]; }

  /// Observer that records every snapshot it sees.
  Observer recorder();

 private:
  std::vector<NovikovState> states_;
};

}  // namespace novikov
