#include <Eigen/Core>
#include <cmath>

#include "dps/kernels.hpp"
#include "dps/rng.hpp"

namespace dps::kernels {
namespace {

constexpr int kParticles = 64;
constexpr int kFrames = 8;
constexpr double kVelX = 2.0;
constexpr double kVelY = 1.25;
constexpr double kInvTwoSigmaSq = 0.125;  // likelihood sigma = 2

struct PfInput {
  Eigen::ArrayXd obs_x, obs_y;              // per frame
  Eigen::ArrayXd init_x, init_y;            // per particle
  Eigen::ArrayXXd noise_x, noise_y;         // frames x particles
};

PfInput generate(std::uint64_t seed) {
  Rng rng(seed);
  PfInput in;
  in.obs_x.resize(kFrames);
  in.obs_y.resize(kFrames);
  double tx = 64.0, ty = 64.0;
  for (int f = 0; f < kFrames; ++f) {
    tx += kVelX;
    ty += kVelY;
    in.obs_x[f] = tx + rng.noise(1.0);
    in.obs_y[f] = ty + rng.noise(1.0);
  }
  in.init_x.resize(kParticles);
  in.init_y.resize(kParticles);
  for (int p = 0; p < kParticles; ++p) {
    in.init_x[p] = 64.0 + rng.noise(2.0);
    in.init_y[p] = 64.0 + rng.noise(2.0);
  }
  in.noise_x.resize(kFrames, kParticles);
  in.noise_y.resize(kFrames, kParticles);
  for (int f = 0; f < kFrames; ++f)
    for (int p = 0; p < kParticles; ++p) {
      in.noise_x(f, p) = rng.noise(0.75);
      in.noise_y(f, p) = rng.noise(0.75);
    }
  return in;
}

}  // namespace

// Reduced tracking pipeline: no resampling step, so the tracked instruction
// stream is identical for every transformer.
WorkloadResult run_particlefilter(const Transformer& transformer, std::uint64_t seed,
                                  const CacheConfig& cache_cfg) {
  PfInput in = generate(seed);

  Eigen::ArrayXd px = in.init_x;
  Eigen::ArrayXd py = in.init_y;
  Eigen::ArrayXd weight = Eigen::ArrayXd::Constant(kParticles, 1.0 / kParticles);
  Eigen::ArrayXd likelihood(kParticles);
  Eigen::ArrayXd est_x(kFrames), est_y(kFrames);

  ExecutionContext ctx(PrecisionFormat::double_precision(), transformer, cache_cfg);
  ctx.map_region(px.data(), sizeof(double) * kParticles);
  ctx.map_region(py.data(), sizeof(double) * kParticles);
  ctx.map_region(weight.data(), sizeof(double) * kParticles);
  ctx.map_region(likelihood.data(), sizeof(double) * kParticles);
  ctx.map_region(in.obs_x.data(), sizeof(double) * kFrames);
  ctx.map_region(in.obs_y.data(), sizeof(double) * kFrames);
  ctx.map_region(in.noise_x.data(), sizeof(double) * kFrames * kParticles);
  ctx.map_region(in.noise_y.data(), sizeof(double) * kFrames * kParticles);
  ctx.map_region(est_x.data(), sizeof(double) * kFrames);
  ctx.map_region(est_y.data(), sizeof(double) * kFrames);

  for (int f = 0; f < kFrames; ++f) {
    {
      ScopedCall call(ctx, "apply_motion_model");
      for (int p = 0; p < kParticles; ++p) {
        const double x = ctx.fp_load(px[p]);
        const double nx = ctx.fp_load(in.noise_x(f, p));
        ctx.fp_store(px[p], ctx.fp_op(ctx.fp_op(x + kVelX) + nx));
        const double y = ctx.fp_load(py[p]);
        const double ny = ctx.fp_load(in.noise_y(f, p));
        ctx.fp_store(py[p], ctx.fp_op(ctx.fp_op(y + kVelY) + ny));
        ctx.overhead(2);
      }
    }
    {
      ScopedCall call(ctx, "compute_likelihood");
      const double ox = ctx.fp_load(in.obs_x[f]);
      const double oy = ctx.fp_load(in.obs_y[f]);
      for (int p = 0; p < kParticles; ++p) {
        const double dx = ctx.fp_op(ctx.fp_load(px[p]) - ox);
        const double dy = ctx.fp_op(ctx.fp_load(py[p]) - oy);
        const double d2 = ctx.fp_op(ctx.fp_op(dx * dx) + ctx.fp_op(dy * dy));
        const double arg = ctx.fp_op(d2 * -kInvTwoSigmaSq);
        ctx.fp_store(likelihood[p], ctx.fp_op(std::exp(arg)));
        ctx.overhead(3);
      }
    }
    {
      ScopedCall call(ctx, "update_weights");
      for (int p = 0; p < kParticles; ++p) {
        const double w = ctx.fp_load(weight[p]);
        const double l = ctx.fp_load(likelihood[p]);
        ctx.fp_store(weight[p], ctx.fp_op(w * l));
        ctx.overhead(2);
      }
    }
    {
      ScopedCall call(ctx, "normalize_weights");
      double sum = 0.0;
      for (int p = 0; p < kParticles; ++p) sum = ctx.fp_op(sum + ctx.fp_load(weight[p]));
      const double inv = ctx.fp_op(1.0 / sum);
      for (int p = 0; p < kParticles; ++p) {
        const double w = ctx.fp_load(weight[p]);
        ctx.fp_store(weight[p], ctx.fp_op(w * inv));
        ctx.overhead(1);
      }
    }
    {
      ScopedCall call(ctx, "estimate_position");
      double ex = 0.0, ey = 0.0;
      for (int p = 0; p < kParticles; ++p) {
        const double w = ctx.fp_load(weight[p]);
        ex = ctx.fp_op(ex + ctx.fp_op(w * ctx.fp_load(px[p])));
        ey = ctx.fp_op(ey + ctx.fp_op(w * ctx.fp_load(py[p])));
        ctx.overhead(2);
      }
      ctx.fp_store(est_x[f], ex);
      ctx.fp_store(est_y[f], ey);
    }
  }

  ctx.finish();
  WorkloadResult res;
  res.output.values.resize(2 * kFrames);
  for (int f = 0; f < kFrames; ++f) {
    res.output.values[2 * f] = est_x[f];
    res.output.values[2 * f + 1] = est_y[f];
  }
  res.trace = ctx.take_trace();
  return res;
}

}  // namespace dps::kernels
