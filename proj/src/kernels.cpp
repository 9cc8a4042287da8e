#include "dps/kernels.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dps/errors.hpp"

namespace dps {

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list: " + path);

  Graph g;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long src, dst;
    if (!(ls >> src)) continue;  // blank or comment-only line
    if (!(ls >> dst) || src < 0 || dst < 0)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 'src dst' pair");
    long long extra;
    if (ls >> extra)
      throw DataError(path + ":" + std::to_string(line_no) + ": trailing tokens");
    edges.emplace_back(static_cast<int>(src), static_cast<int>(dst));
    g.num_vertices = std::max(g.num_vertices, static_cast<int>(std::max(src, dst)) + 1);
  }
  if (edges.empty()) throw DataError(path + ": no edges");
  g.out_edges.resize(g.num_vertices);
  for (auto [s, d] : edges) g.out_edges[s].push_back(d);
  return g;
}

WorkloadInput WorkloadInput::from_file(const std::string& workload,
                                       const std::string& path) {
  if (workload != "pagerank")
    throw std::invalid_argument("workload '" + workload + "' does not accept an input file");
  WorkloadInput in;
  in.descriptor = path;
  in.graph = std::make_shared<Graph>(load_edge_list(path));
  return in;
}

const std::vector<WorkloadSpec>& list_workloads() {
  static const std::vector<WorkloadSpec> specs = {
      {"blackscholes",
       "closed-form European option pricing, one call per option",
       PrecisionFormat::single_precision(),
       {"BlkSchlsEqEuroNoDiv"},
       false},
      {"hotspot",
       "5-point stencil thermal grid, one call per outer iteration",
       PrecisionFormat::double_precision(),
       {"find_delta"},
       false},
      {"pagerank",
       "iterative rank propagation, one call per iteration",
       PrecisionFormat::single_precision(),
       {"pagerank_calculate"},
       true},
      {"particlefilter_lite",
       "object tracking pipeline, five calls per frame",
       PrecisionFormat::double_precision(),
       {"apply_motion_model", "compute_likelihood", "update_weights",
        "normalize_weights", "estimate_position"},
       false},
      {"synthetic_additive",
       "validation workload with exactly additive per-call error",
       PrecisionFormat::single_precision(),
       {"dense_term", "sparse_term"},
       false},
  };
  return specs;
}

const WorkloadSpec& workload_spec(const std::string& name) {
  for (const auto& s : list_workloads())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown workload: " + name);
}

WorkloadResult run_workload(const std::string& name, const Transformer& transformer,
                            std::uint64_t seed, const CacheConfig& cache_cfg,
                            const WorkloadInput& input) {
  workload_spec(name);  // validates the name
  if (input.graph && name != "pagerank")
    throw std::invalid_argument("workload '" + name + "' does not accept an input file");
  if (name == "blackscholes")
    return kernels::run_blackscholes(transformer, seed, cache_cfg);
  if (name == "hotspot") return kernels::run_hotspot(transformer, seed, cache_cfg);
  if (name == "pagerank")
    return kernels::run_pagerank(transformer, seed, cache_cfg, input);
  if (name == "particlefilter_lite")
    return kernels::run_particlefilter(transformer, seed, cache_cfg);
  return kernels::run_synthetic_additive(transformer, seed, cache_cfg);
}

}  // namespace dps
