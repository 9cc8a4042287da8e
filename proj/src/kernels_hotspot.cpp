#include <Eigen/Core>

#include "dps/kernels.hpp"
#include "dps/rng.hpp"

namespace dps::kernels {
namespace {

constexpr int kRows = 16;
constexpr int kCols = 16;
constexpr int kIterations = 8;

// Thermal RC constants for a 16x16 die sampling.
struct ThermalParams {
  double step_over_cap;
  double inv_rx, inv_ry, inv_rz;
  double ambient = 80.0;
};

ThermalParams derive_params() {
  const double t_chip = 0.0005;
  const double chip_height = 0.016, chip_width = 0.016;
  const double factor_chip = 0.5, spec_heat = 1.75e6, k_si = 100.0;
  const double max_pd = 3.0e6, precision = 0.001;

  const double gh = chip_height / kRows;
  const double gw = chip_width / kCols;
  const double cap = factor_chip * spec_heat * t_chip * gh * gw;
  const double rx = gw / (2.0 * k_si * t_chip * gh);
  const double ry = gh / (2.0 * k_si * t_chip * gw);
  const double rz = t_chip / (k_si * gh * gw);
  const double step = precision / (max_pd / (factor_chip * t_chip * spec_heat));

  return {step / cap, 1.0 / rx, 1.0 / ry, 1.0 / rz};
}

struct GridState {
  Eigen::ArrayXXd temp;   // kRows x kCols
  Eigen::ArrayXXd power;
};

GridState generate(std::uint64_t seed) {
  Rng rng(seed);
  GridState g;
  g.temp.resize(kRows, kCols);
  g.power.resize(kRows, kCols);
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kCols; ++c) g.temp(r, c) = 323.15 + rng.uniform(-2.0, 2.0);
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kCols; ++c) g.power(r, c) = rng.uniform(0.0, 0.02);
  return g;
}

}  // namespace

WorkloadResult run_hotspot(const Transformer& transformer, std::uint64_t seed,
                           const CacheConfig& cache_cfg) {
  const ThermalParams p = derive_params();
  GridState g = generate(seed);
  Eigen::ArrayXXd delta(kRows, kCols);

  ExecutionContext ctx(PrecisionFormat::double_precision(), transformer, cache_cfg);
  const std::size_t grid_bytes = sizeof(double) * kRows * kCols;
  ctx.map_region(g.temp.data(), grid_bytes);
  ctx.map_region(g.power.data(), grid_bytes);
  ctx.map_region(delta.data(), grid_bytes);

  for (int it = 0; it < kIterations; ++it) {
    ScopedCall call(ctx, "find_delta");
    // Jacobi sweep: deltas from the previous state, then one apply pass.
    for (int r = 0; r < kRows; ++r) {
      for (int c = 0; c < kCols; ++c) {
        const int rn = r > 0 ? r - 1 : r;
        const int rs = r < kRows - 1 ? r + 1 : r;
        const int cw = c > 0 ? c - 1 : c;
        const int ce = c < kCols - 1 ? c + 1 : c;

        const double t = ctx.fp_load(g.temp(r, c));
        const double tn = ctx.fp_load(g.temp(rn, c));
        const double ts = ctx.fp_load(g.temp(rs, c));
        const double tw = ctx.fp_load(g.temp(r, cw));
        const double te = ctx.fp_load(g.temp(r, ce));
        const double pw = ctx.fp_load(g.power(r, c));

        const double two_t = ctx.fp_op(2.0 * t);
        const double vert = ctx.fp_op(ctx.fp_op(tn + ts) - two_t);
        const double horiz = ctx.fp_op(ctx.fp_op(tw + te) - two_t);
        const double dv = ctx.fp_op(vert * p.inv_ry);
        const double dh = ctx.fp_op(horiz * p.inv_rx);
        const double sink = ctx.fp_op(ctx.fp_op(p.ambient - t) * p.inv_rz);
        const double sum = ctx.fp_op(ctx.fp_op(pw + dv) + ctx.fp_op(dh + sink));
        ctx.fp_store(delta(r, c), ctx.fp_op(p.step_over_cap * sum));
        ctx.overhead(6);
      }
    }
    for (int r = 0; r < kRows; ++r) {
      for (int c = 0; c < kCols; ++c) {
        const double d = ctx.fp_load(delta(r, c));
        const double t = ctx.fp_load(g.temp(r, c));
        ctx.fp_store(g.temp(r, c), ctx.fp_op(t + d));
        ctx.overhead(2);
      }
    }
  }

  ctx.finish();
  WorkloadResult res;
  res.output.values.resize(kRows * kCols);
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kCols; ++c) res.output.values[r * kCols + c] = g.temp(r, c);
  res.trace = ctx.take_trace();
  return res;
}

}  // namespace dps::kernels
