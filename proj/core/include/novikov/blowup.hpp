#pragma once

#include <string>
#include <utility>
#include <vector>

#include "novikov/state.hpp"

namespace novikov {

/// Timestamped blow-up monitor records. Case series stay empty unless the
/// matching monitors were attached; attached series share the length of
/// `times`.
struct MonitorSeries {
  std::vector<double> times;
  std::vector<double> linf_max;       // max over all 2N momenta of the sup norm
  std::vector<double> general_accum;  // running trapezoid of linf_max^2 (Theorem-4.1 functional)
  std::vector<double> case1_min_uxv;
  std::vector<double> case1_min_uvx;
  std::vector<double> case2_min_drift;      // min (u u_x + v v_x)
  std::vector<double> case2_max_wronskian;  // max |u_x v - u v_x|
  std::vector<std::string> flags;           // detection outcomes, filled by detect_divergence

  int size() const { return static_cast<int>(times.size()); }
};

/// Appends the sup norm and the accumulated int_0^t ||M||_inf^2 dtau
/// (trapezoidal in the sample times) to the series.
void monitor_general(const NovikovState& s, MonitorSeries& series);

/// Grid minima of u_x v and u v_x (case-1 / GX criterion).
std::pair<double, double> monitor_case1(const RealField& u, const RealField& v);

/// Grid minimum of u u_x + v v_x and maximum of |u_x v - u v_x| (case-2 criterion).
std::pair<double, double> monitor_case2(const RealField& u, const RealField& v);

struct DivergenceFlags {
  bool linf_cap = false;
  bool case1_uxv = false;
  bool case1_uvx = false;
  bool case2_drift = false;
  bool case2_wronskian = false;

  bool any() const { return linf_cap || case1_uxv || case1_uvx || case2_drift || case2_wronskian; }
  std::vector<std::string> to_strings() const;
};

/// Finite-horizon surrogate for the liminf/limsup criteria: a monitor flags
/// when its magnitude threshold and its recent-window slope threshold are both
/// exceeded; the sup norm flags on the cap alone.
struct DetectionPolicy {
  double linf_cap = 1e6;
  double magnitude = 1e3;  // default 1e3 * initial scale, see make_default_policy
  double rate = 1e2;       // per unit time
  int window = 20;         // samples in the slope window
};

DetectionPolicy make_default_policy(double initial_scale, double linf_cap);

/// Throws std::invalid_argument("insufficient data") when the series is
/// shorter than the policy window.
DivergenceFlags detect_divergence(const MonitorSeries& series, const DetectionPolicy& policy);

/// Observer that appends the general monitor on every snapshot and the
/// case-1/case-2 monitors when the state's reduction tag matches.
class BlowupMonitor {
 public:
  void operator()(const NovikovState& s);
  const MonitorSeries& series() const { return series_; }
  MonitorSeries& series() { return series_; }

 private:
  MonitorSeries series_;
};

}  // namespace novikov
