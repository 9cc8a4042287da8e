#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dps/profiler.hpp"

namespace dps {

// Number of least-significant mantissa bits to omit per dynamic call, plus
// the provenance needed to interpret a schedule file on its own.
struct OmissionSchedule {
  Eigen::ArrayXi omitted;               // per call
  std::string policy;                   // dps | dps+ | sps | sps+
  double target = 0.0;                  // accuracy-loss bound (dps/dps+/sps+)
  double fraction = 0.0;                // static omission fraction (sps)
  std::string matrix_fingerprint;       // empty for sps
  std::vector<std::string> static_fns;  // per call

  Eigen::Index num_calls() const { return omitted.size(); }
};

// Per-call planner: for each call independently, omit the largest prefix n of
// mantissa bits such that every profiled entry below n is valid (for both
// polarities) and the accumulated worst-case loss stays strictly below the
// target. A row that tolerates everything omits all profiled bits; a row
// whose first bit is invalid (or a non-positive target) omits none.
OmissionSchedule plan_dps(const AccLossMatrices& m, double target);

// Dependency-aware refinement: every call except the last is additionally
// constrained by its immediate follower's row (validity and running sum), so
// a producer never carries less precision than its consumer accepts. The
// last call falls back to the per-call rule.
OmissionSchedule plan_dps_plus(const AccLossMatrices& m, double target);

// Static baseline: ceil(fraction * num_bits) everywhere.
OmissionSchedule plan_sps(double fraction, int num_bits, int num_calls);

// Static per-function baseline: the per-call plan collapsed to the minimum
// over each static function's dynamic calls.
OmissionSchedule plan_sps_plus(const AccLossMatrices& m, double target);

// JSON schedule file with a provenance block, the per-call array, and the
// static-function map.
void save_schedule(const OmissionSchedule& s, const std::string& path);
OmissionSchedule load_schedule(const std::string& path);

}  // namespace dps
