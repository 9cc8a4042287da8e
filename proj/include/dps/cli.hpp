#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dps/config.hpp"
#include "dps/kernels.hpp"
#include "dps/policy.hpp"

namespace dps {

// Full command-line entry point. Exit codes: 0 success, 1 usage error,
// 2 data error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);  // without argv[0]

namespace cli {

// Replay a schedule against a workload and assemble the self-describing run
// report (accuracy + energy + per-call omitted series). Shared by `run` and
// `sweep`.
struct RunOutcome {
  double mre = 0.0;
  double savings = 0.0;
  double total_nj = 0.0;
  double baseline_nj = 0.0;
  std::string report_json;  // serialized RunReport
};

RunOutcome replay_schedule(const std::string& workload, const WorkloadInput& input,
                           std::uint64_t seed, const OmissionSchedule& schedule,
                           const WorkbenchConfig& cfg,
                           const std::vector<double>& thresholds);

}  // namespace cli
}  // namespace dps
