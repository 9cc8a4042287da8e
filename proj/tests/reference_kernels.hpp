#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "dps/kernels.hpp"

// Plain, untraced re-implementations of the bundled workloads, written
// independently of the ExecutionContext path. Identity-transformer runs must
// match these bit for bit.
namespace dps::testref {

Eigen::ArrayXd blackscholes(std::uint64_t seed);
Eigen::ArrayXd hotspot(std::uint64_t seed);
// Max |delta| per outer iteration, for the convergence check.
Eigen::ArrayXd hotspot_max_deltas(std::uint64_t seed);
Eigen::ArrayXd pagerank(std::uint64_t seed, const Graph* graph);  // null = embedded
Eigen::ArrayXd particlefilter(std::uint64_t seed);
Eigen::ArrayXd synthetic_additive();

}  // namespace dps::testref
