#pragma once

#include <string>

#include "dps/cachesim.hpp"
#include "dps/energy.hpp"

namespace dps {

// Workbench-level overrides, loadable from a key=value file. Recognized keys:
//   l1_size l2_size line_size l1_assoc l2_assoc
//   epi_rf epi_l1 epi_l2 epi_mem_rd epi_mem_wr
//   epi_scaling (total | mantissa)
// '#' starts a comment; blank lines are ignored. Unknown keys raise DataError.
struct WorkbenchConfig {
  CacheConfig cache;
  EpiTable epi;
  EpiScaling scaling = EpiScaling::TotalWidth;
};

WorkbenchConfig load_config(const std::string& path);

}  // namespace dps
