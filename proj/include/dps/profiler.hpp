#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dps/cachesim.hpp"
#include "dps/fpbits.hpp"
#include "dps/kernels.hpp"

namespace dps {

// Accuracy-loss matrices from the offline fault-injection campaign: one entry
// per (dynamic call, mantissa bit, stuck-at polarity). An entry is valid iff
// the faulty run produced a fully finite output; its value is the mean
// relative error against the golden run, per-point capped at 1.
struct AccLossMatrices {
  Eigen::ArrayXXd s0, s1;  // num_calls x num_bits
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> s0_valid, s1_valid;
  std::vector<std::string> static_fns;  // per call, execution order
  std::string fingerprint;              // workload/input/seed/format/bits

  Eigen::Index num_calls() const { return s0.rows(); }
  Eigen::Index num_bits() const { return s0.cols(); }

  bool entry_valid(Eigen::Index call, Eigen::Index bit) const {
    return s0_valid(call, bit) && s1_valid(call, bit);
  }
  double max_loss(Eigen::Index call, Eigen::Index bit) const {
    return std::max(s0(call, bit), s1(call, bit));
  }
};

// One finished fault-injection experiment.
struct ExperimentResult {
  int call = 0;
  int bit = 0;
  FaultPolarity polarity = FaultPolarity::StuckAt0;
  bool valid = false;
  double loss = 0.0;
};

struct ProfileRequest {
  std::string workload;
  WorkloadInput input = WorkloadInput::embedded();
  std::uint64_t seed = 0;
  int num_bits = 0;  // 0 -> full mantissa width of the workload format
  int jobs = 1;
  CacheConfig cache;
};

struct ProfileOutcome {
  AccLossMatrices matrices;
  std::uint64_t fault_runs = 0;  // actual faulty workload executions
};

// Runs the campaign: num_calls x num_bits x 2 faulty executions against one
// golden execution. Experiments are independent; jobs > 1 distributes them
// over threads with deterministic assembly. Throws DataError if the golden
// run is not finite.
ProfileOutcome profile(const ProfileRequest& req);

// Assembles experiment results into matrices. Results may arrive in any
// order but must cover every (call, bit, polarity) key exactly once;
// duplicates or gaps raise DataError.
AccLossMatrices merge_results(const std::vector<ExperimentResult>& results,
                              int num_calls, int num_bits,
                              std::vector<std::string> static_fns,
                              std::string fingerprint);

// CSV persistence: <prefix>.s0.csv and <prefix>.s1.csv. Layout per file:
//   # <fingerprint>;polarity=<s0|s1>
//   call,static_fn,bit0,...,bitN
// with invalid entries encoded as NA. Loading re-validates every entry:
// anything that is not a finite non-negative number becomes invalid.
void write_matrices_csv(const AccLossMatrices& m, const std::string& prefix);
AccLossMatrices load_matrices_csv(const std::string& prefix);

std::string make_fingerprint(const std::string& workload, const std::string& input,
                             std::uint64_t seed, PrecisionFormat format, int bits);

}  // namespace dps
