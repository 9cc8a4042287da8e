#include <Eigen/Core>
#include <bit>

#include "dps/kernels.hpp"

namespace dps::kernels {
namespace {

// Call 0 carries a value whose mantissa is all ones: clearing any subset of
// low bits loses exactly the sum of the per-bit stuck-at-0 losses, so the
// planners' cumulative estimate equals the replayed loss on this workload.
// The remaining calls carry power-of-two values (all mantissa bits zero):
// truncation never changes them, so only call 0 contributes to replay error.
constexpr std::uint32_t kDenseBits = 0x3FFFFFFFu;  // 2 - 2^-23

const float kTerms[8] = {
    std::bit_cast<float>(kDenseBits), 1.0f, 2.0f, 4.0f, 0.5f, 8.0f, 0.25f, 16.0f,
};

}  // namespace

WorkloadResult run_synthetic_additive(const Transformer& transformer,
                                      std::uint64_t /*seed*/,
                                      const CacheConfig& cache_cfg) {
  Eigen::ArrayXf terms(8);
  for (int i = 0; i < 8; ++i) terms[i] = kTerms[i];
  Eigen::ArrayXf out(8);

  ExecutionContext ctx(PrecisionFormat::single_precision(), transformer, cache_cfg);
  ctx.map_region(terms.data(), sizeof(float) * 8);
  ctx.map_region(out.data(), sizeof(float) * 8);
  for (int i = 0; i < 8; ++i) {
    ScopedCall call(ctx, i == 0 ? "dense_term" : "sparse_term");
    const float v = ctx.fp_load(terms[i]);
    ctx.fp_store(out[i], ctx.fp_op(v + 0.0f));
    ctx.overhead(2);
  }

  ctx.finish();
  WorkloadResult res;
  res.output.values = out.cast<double>();
  res.trace = ctx.take_trace();
  return res;
}

}  // namespace dps::kernels
