#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace novikov {

struct VerifyOptions {
  double dt_scale = 1.0;   // sensitivity control: scales the run-based criteria's dt
  bool zero_data = false;  // replace run initial data with zeros; peakon criteria become n/a
  std::uint64_t rng_seed = 0x5eed2024;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string status;  // "pass", "fail" or "not_applicable"
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;

  bool failed() const { return status == "fail"; }
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

/// Runs every acceptance criterion at its pinned tolerance, printing one
/// pass/fail line per criterion to `log` as results land.
VerifyReport run_verification(const VerifyOptions& opts, std::ostream* log);

/// Machine-readable form of the report (per-criterion measured values,
/// tolerances and statuses).
std::string verify_report_json(const VerifyReport& report);

}  // namespace novikov
