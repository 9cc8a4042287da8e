#include <Eigen/Core>
#include <algorithm>

#include "dps/kernels.hpp"
#include "dps/rng.hpp"

namespace dps::kernels {
namespace {

constexpr int kEmbeddedVertices = 32;
constexpr int kIterations = 10;
constexpr float kDamping = 0.85f;

}  // namespace

Graph embedded_pagerank_graph(std::uint64_t seed) {
  Rng rng(seed);
  Graph g;
  g.num_vertices = kEmbeddedVertices;
  g.out_edges.resize(kEmbeddedVertices);
  for (int u = 0; u < kEmbeddedVertices; ++u) {
    const int degree = 2 + static_cast<int>(rng.below(3));
    auto& out = g.out_edges[u];
    while (static_cast<int>(out.size()) < degree) {
      const int v = static_cast<int>(rng.below(kEmbeddedVertices));
      if (v == u) continue;
      if (std::find(out.begin(), out.end(), v) != out.end()) continue;
      out.push_back(v);
    }
  }
  return g;
}

WorkloadResult run_pagerank(const Transformer& transformer, std::uint64_t seed,
                            const CacheConfig& cache_cfg, const WorkloadInput& input) {
  Graph embedded;
  const Graph* graph = input.graph.get();
  if (!graph) {
    embedded = embedded_pagerank_graph(seed);
    graph = &embedded;
  }
  const int n = graph->num_vertices;

  // Structure-derived tables: incoming adjacency, out-degrees, dangling list.
  std::vector<std::vector<int>> in_edges(n);
  std::vector<int> dangling;
  Eigen::ArrayXf out_degree(n);
  for (int u = 0; u < n; ++u) {
    out_degree[u] = static_cast<float>(graph->out_edges[u].size());
    if (graph->out_edges[u].empty()) dangling.push_back(u);
    for (int v : graph->out_edges[u]) in_edges[v].push_back(u);
  }

  const float inv_n = 1.0f / static_cast<float>(n);
  const float base_const = (1.0f - kDamping) * inv_n;

  Eigen::ArrayXf rank = Eigen::ArrayXf::Constant(n, inv_n);
  Eigen::ArrayXf next_rank(n);
  Eigen::ArrayXf contrib = Eigen::ArrayXf::Zero(n);

  ExecutionContext ctx(PrecisionFormat::single_precision(), transformer, cache_cfg);
  ctx.map_region(rank.data(), sizeof(float) * n);
  ctx.map_region(next_rank.data(), sizeof(float) * n);
  ctx.map_region(contrib.data(), sizeof(float) * n);
  ctx.map_region(out_degree.data(), sizeof(float) * n);

  for (int it = 0; it < kIterations; ++it) {
    ScopedCall call(ctx, "pagerank_calculate");

    for (int u = 0; u < n; ++u) {
      if (out_degree[u] == 0.0f) continue;  // structural, not value-dependent
      const float ru = ctx.fp_load(rank[u]);
      const float du = ctx.fp_load(out_degree[u]);
      ctx.fp_store(contrib[u], ctx.fp_op(ru / du));
      ctx.overhead(2);
    }

    // Dangling mass is redistributed uniformly so the rank total is conserved.
    float dangling_mass = 0.0f;
    for (int u : dangling) dangling_mass = ctx.fp_op(dangling_mass + ctx.fp_load(rank[u]));
    const float base = ctx.fp_op(
        base_const + ctx.fp_op(kDamping * ctx.fp_op(dangling_mass * inv_n)));

    for (int v = 0; v < n; ++v) {
      float sum = 0.0f;
      for (int u : in_edges[v]) sum = ctx.fp_op(sum + ctx.fp_load(contrib[u]));
      ctx.fp_store(next_rank[v], ctx.fp_op(base + ctx.fp_op(kDamping * sum)));
      ctx.overhead(3);
    }

    rank.swap(next_rank);
  }

  ctx.finish();
  WorkloadResult res;
  res.output.values = rank.cast<double>();
  res.trace = ctx.take_trace();
  return res;
}

}  // namespace dps::kernels
