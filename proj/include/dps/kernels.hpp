#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dps/cachesim.hpp"
#include "dps/trace.hpp"

namespace dps {

// Directed graph for the pagerank workload, adjacency by out-edges.
struct Graph {
  int num_vertices = 0;
  std::vector<std::vector<int>> out_edges;
};

// Whitespace-separated "src dst" pairs with 0-based vertex ids; '#' starts a
// comment. Vertex count is max id + 1. Throws DataError on malformed input.
Graph load_edge_list(const std::string& path);

// External input for a workload run. Only pagerank accepts one (an edge-list
// graph); all other workloads use their embedded seeded generators.
struct WorkloadInput {
  std::string descriptor = "embedded";
  std::shared_ptr<const Graph> graph;  // null -> embedded default

  static WorkloadInput embedded() { return WorkloadInput{}; }
  static WorkloadInput from_file(const std::string& workload, const std::string& path);
};

struct WorkloadSpec {
  std::string name;
  std::string description;
  PrecisionFormat format = PrecisionFormat::double_precision();
  std::vector<std::string> approximable_fns;
  bool accepts_edge_list = false;
};

struct WorkloadOutput {
  Eigen::ArrayXd values;  // ordered data points (float outputs widened exactly)
};

struct WorkloadResult {
  WorkloadOutput output;
  CallTrace trace;
};

// Stable enumeration of the bundled workloads.
const std::vector<WorkloadSpec>& list_workloads();

const WorkloadSpec& workload_spec(const std::string& name);  // throws invalid_argument

// Executes one workload under the given transformer. The same (name, input,
// seed) always produces the same dynamic-call sequence and instruction
// counts; the transformer changes values only.
WorkloadResult run_workload(const std::string& name, const Transformer& transformer,
                            std::uint64_t seed, const CacheConfig& cache_cfg,
                            const WorkloadInput& input = WorkloadInput::embedded());

namespace kernels {
WorkloadResult run_blackscholes(const Transformer&, std::uint64_t seed,
                                const CacheConfig&);
WorkloadResult run_hotspot(const Transformer&, std::uint64_t seed,
                           const CacheConfig&);
WorkloadResult run_pagerank(const Transformer&, std::uint64_t seed,
                            const CacheConfig&, const WorkloadInput&);
WorkloadResult run_particlefilter(const Transformer&, std::uint64_t seed,
                                  const CacheConfig&);
WorkloadResult run_synthetic_additive(const Transformer&, std::uint64_t seed,
                                      const CacheConfig&);

// Embedded pagerank graph (32 vertices, seeded, no dangling vertices).
Graph embedded_pagerank_graph(std::uint64_t seed);
}  // namespace kernels

}  // namespace dps
