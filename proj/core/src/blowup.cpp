#include "novikov/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "novikov/spectral.hpp"

namespace novikov {

void monitor_general(const NovikovState& s, MonitorSeries& series) {
  if (!series.times.empty() && !(s.time > series.times.back()))
    throw std::invalid_argument("monitor_general: sample times must increase strictly");
  const double linf = s.max_linf();
  double accum = 0.0;
  if (!series.times.empty()) {
    const double dt = s.time - series.times.back();
    const double prev = series.linf_max.back();
    accum = series.general_accum.back() + 0.5 * dt * (prev * prev + linf * linf);
  }
  series.times.push_back(s.time);
  series.linf_max.push_back(linf);
  series.general_accum.push_back(accum);
}

std::pair<double, double> monitor_case1(const RealField& u, const RealField& v) {
  require_same_grid(u, v, "monitor_case1");
  const RealField ux = derivative(u);
  const RealField vx = derivative(v);
  double min_uxv = std::numeric_limits<double>::infinity();
  double min_uvx = std::numeric_limits<double>::infinity();
  for (int k = 0; k < u.size(); ++k) {
    min_uxv = std::min(min_uxv, ux[k] * v[k]);
    min_uvx = std::min(min_uvx, u[k] * vx[k]);
  }
  return {min_uxv, min_uvx};
}

std::pair<double, double> monitor_case2(const RealField& u, const RealField& v) {
  require_same_grid(u, v, "monitor_case2");
  const RealField ux = derivative(u);
  const RealField vx = derivative(v);
  double min_drift = std::numeric_limits<double>::infinity();
  double max_wronskian = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    min_drift = std::min(min_drift, u[k] * ux[k] + v[k] * vx[k]);
    max_wronskian = std::max(max_wronskian, std::abs(ux[k] * v[k] - u[k] * vx[k]));
  }
  return {min_drift, max_wronskian};
}

std::vector<std::string> DivergenceFlags::to_strings() const {
  std::vector<std::string> out;
  if (linf_cap) out.push_back("linf_cap");
  if (case1_uxv) out.push_back("case1_uxv");
  if (case1_uvx) out.push_back("case1_uvx");
  if (case2_drift) out.push_back("case2_drift");
  if (case2_wronskian) out.push_back("case2_wronskian");
  return out;
}

DetectionPolicy make_default_policy(double initial_scale, double linf_cap) {
  DetectionPolicy policy;
  policy.linf_cap = linf_cap;
  policy.magnitude = 1e3 * std::max(initial_scale, 1e-300);
  policy.rate = 1e2;
  policy.window = 20;
  return policy;
}

namespace {

// Least-squares slope over the last `window` samples.
double recent_slope(const std::vector<double>& times, const std::vector<double>& values,
                    int window) {
  const int n = static_cast<int>(times.size());
  const int begin = n - window;
  double tbar = 0.0, vbar = 0.0;
  for (int i = begin; i < n; ++i) {
    tbar += times[i];
    vbar += values[i];
  }
  tbar /= window;
  vbar /= window;
  double num = 0.0, den = 0.0;
  for (int i = begin; i < n; ++i) {
    num += (times[i] - tbar) * (values[i] - vbar);
    den += (times[i] - tbar) * (times[i] - tbar);
  }
  return den > 0.0 ? num / den : 0.0;
}

bool diverges_down(const std::vector<double>& times, const std::vector<double>& values,
                   const DetectionPolicy& policy) {
  if (values.empty()) return false;
  if (!(values.back() < -policy.magnitude)) return false;
  return recent_slope(times, values, policy.window) < -policy.rate;
}

bool diverges_up(const std::vector<double>& times, const std::vector<double>& values,
                 const DetectionPolicy& policy) {
  if (values.empty()) return false;
  if (!(values.back() > policy.magnitude)) return false;
  return recent_slope(times, values, policy.window) > policy.rate;
}

}  // namespace

DivergenceFlags detect_divergence(const MonitorSeries& series, const DetectionPolicy& policy) {
  if (series.size() < policy.window)
    throw std::invalid_argument("detect_divergence: insufficient data");
  DivergenceFlags flags;
  for (double v : series.linf_max)
    if (v > policy.linf_cap) flags.linf_cap = true;
  flags.case1_uxv = diverges_down(series.times, series.case1_min_uxv, policy);
  flags.case1_uvx = diverges_down(series.times, series.case1_min_uvx, policy);
  flags.case2_drift = diverges_down(series.times, series.case2_min_drift, policy);
  flags.case2_wronskian = diverges_up(series.times, series.case2_max_wronskian, policy);
  return flags;
}

void BlowupMonitor::operator()(const NovikovState& s) {
  monitor_general(s, series_);
  if (s.reduction == ReductionKind::gx || s.reduction == ReductionKind::case1) {
    const ReducedView rv = reduced_view(s);
    const auto [min_uxv, min_uvx] = monitor_case1(rv.u, rv.v);
    series_.case1_min_uxv.push_back(min_uxv);
    series_.case1_min_uvx.push_back(min_uvx);
  } else if (s.reduction == ReductionKind::case2) {
    const ReducedView rv = reduced_view(s);
    const auto [min_drift, max_wronskian] = monitor_case2(rv.u, rv.v);
    series_.case2_min_drift.push_back(min_drift);
    series_.case2_max_wronskian.push_back(max_wronskian);
  }
}

}  // namespace novikov
