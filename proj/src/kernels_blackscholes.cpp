#include <Eigen/Core>
#include <cmath>

#include "dps/kernels.hpp"
#include "dps/rng.hpp"

namespace dps::kernels {
namespace {

constexpr int kNumOptions = 64;
constexpr float kInvSqrt2Pi = 0.3989422804014327f;

// Cumulative normal via the Abramowitz-Stegun 5-term polynomial. Both the
// positive and the mirrored result are always computed so the tracked
// instruction stream does not depend on the (possibly corrupted) sign of x.
float cndf(ExecutionContext& ctx, float x) {
  const float ax = ctx.fp_op(std::fabs(x));
  const float kd = ctx.fp_op(0.2316419f * ax);
  const float k = ctx.fp_op(1.0f / ctx.fp_op(1.0f + kd));

  const float x2 = ctx.fp_op(ax * ax);
  const float e = ctx.fp_op(std::exp(ctx.fp_op(x2 * -0.5f)));
  const float pdf = ctx.fp_op(e * kInvSqrt2Pi);

  const float k2 = ctx.fp_op(k * k);
  const float k3 = ctx.fp_op(k2 * k);
  const float k4 = ctx.fp_op(k3 * k);
  const float k5 = ctx.fp_op(k4 * k);
  float poly = ctx.fp_op(0.319381530f * k);
  poly = ctx.fp_op(poly + ctx.fp_op(-0.356563782f * k2));
  poly = ctx.fp_op(poly + ctx.fp_op(1.781477937f * k3));
  poly = ctx.fp_op(poly + ctx.fp_op(-1.821255978f * k4));
  poly = ctx.fp_op(poly + ctx.fp_op(1.330274429f * k5));

  const float n_pos = ctx.fp_op(1.0f - ctx.fp_op(pdf * poly));
  const float n_neg = ctx.fp_op(1.0f - n_pos);
  return std::signbit(x) ? n_neg : n_pos;
}

struct Options {
  Eigen::ArrayXf spot, strike, rate, vol, expiry;
  std::vector<bool> is_call;
};

Options generate(std::uint64_t seed) {
  Rng rng(seed);
  Options o;
  o.spot.resize(kNumOptions);
  o.strike.resize(kNumOptions);
  o.rate.resize(kNumOptions);
  o.vol.resize(kNumOptions);
  o.expiry.resize(kNumOptions);
  o.is_call.resize(kNumOptions);
  for (int i = 0; i < kNumOptions; ++i) {
    o.spot[i] = static_cast<float>(rng.uniform(20.0, 150.0));
    o.strike[i] = static_cast<float>(rng.uniform(20.0, 150.0));
    o.rate[i] = static_cast<float>(rng.uniform(0.01, 0.10));
    o.vol[i] = static_cast<float>(rng.uniform(0.05, 0.65));
    o.expiry[i] = static_cast<float>(rng.uniform(0.10, 2.00));
    o.is_call[i] = (i % 2) == 0;
  }
  return o;
}

}  // namespace

WorkloadResult run_blackscholes(const Transformer& transformer, std::uint64_t seed,
                                const CacheConfig& cache_cfg) {
  Options opt = generate(seed);
  ExecutionContext ctx(PrecisionFormat::single_precision(), transformer, cache_cfg);
  Eigen::ArrayXf prices(kNumOptions);
  for (const auto* a : {&opt.spot, &opt.strike, &opt.rate, &opt.vol, &opt.expiry})
    ctx.map_region(a->data(), sizeof(float) * kNumOptions);
  ctx.map_region(prices.data(), sizeof(float) * kNumOptions);

  for (int i = 0; i < kNumOptions; ++i) {
    ScopedCall call(ctx, "BlkSchlsEqEuroNoDiv");
    const float s = ctx.fp_load(opt.spot[i]);
    const float k = ctx.fp_load(opt.strike[i]);
    const float r = ctx.fp_load(opt.rate[i]);
    const float v = ctx.fp_load(opt.vol[i]);
    const float t = ctx.fp_load(opt.expiry[i]);

    const float sqrt_t = ctx.fp_op(std::sqrt(t));
    const float log_sk = ctx.fp_op(std::log(ctx.fp_op(s / k)));
    const float drift = ctx.fp_op(r + ctx.fp_op(ctx.fp_op(v * v) * 0.5f));
    const float den = ctx.fp_op(v * sqrt_t);
    const float d1 = ctx.fp_op(ctx.fp_op(log_sk + ctx.fp_op(drift * t)) / den);
    const float d2 = ctx.fp_op(d1 - den);

    const float n_d1 = cndf(ctx, d1);
    const float n_d2 = cndf(ctx, d2);

    const float rt = ctx.fp_op(r * t);
    const float fv = ctx.fp_op(k * ctx.fp_op(std::exp(ctx.fp_op(-rt))));

    const float call_px = ctx.fp_op(ctx.fp_op(s * n_d1) - ctx.fp_op(fv * n_d2));
    const float m_d1 = ctx.fp_op(1.0f - n_d1);
    const float m_d2 = ctx.fp_op(1.0f - n_d2);
    const float put_px = ctx.fp_op(ctx.fp_op(fv * m_d2) - ctx.fp_op(s * m_d1));

    ctx.fp_store(prices[i], opt.is_call[i] ? call_px : put_px);
    ctx.overhead(12);
  }

  ctx.finish();
  WorkloadResult res;
  res.output.values = prices.cast<double>();
  res.trace = ctx.take_trace();
  return res;
}

}  // namespace dps::kernels
