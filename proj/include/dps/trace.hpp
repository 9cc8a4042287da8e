#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dps/cachesim.hpp"
#include "dps/fpbits.hpp"

namespace dps {

// Value transformers applied at every tracked floating-point site inside an
// approximable call. Outside calls, values pass through unchanged.
struct IdentityTransform {};

// Omit `omitted_per_call[i]` low mantissa bits of every value produced or
// moved inside dynamic call i. An all-zero vector behaves as Identity.
struct TruncateTransform {
  std::vector<int> omitted_per_call;
};

// Force one mantissa bit in every value touched inside exactly one dynamic
// call; all sites in that call get the same fault.
struct FaultTransform {
  MantissaFault fault;
  std::size_t target_call = 0;
};

using Transformer = std::variant<IdentityTransform, TruncateTransform, FaultTransform>;

// One invocation of an approximable static function, in global execution
// order.
struct DynamicCall {
  std::size_t index = 0;
  std::string static_fn;
  std::string label;
};

struct CategoryCounts {
  std::array<std::uint64_t, kNumOperandCategories> approximable{};
  std::array<std::uint64_t, kNumOperandCategories> non_approximable{};

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (int c = 0; c < kNumOperandCategories; ++c)
      t += approximable[c] + non_approximable[c];
    return t;
  }
  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;
};

// Per-call instruction counts split by operand-source category and
// approximability. `ambient` collects instructions tracked outside any call.
struct CallTrace {
  PrecisionFormat format = PrecisionFormat::double_precision();
  std::vector<DynamicCall> calls;
  std::vector<CategoryCounts> per_call;
  CategoryCounts ambient;

  std::size_t num_calls() const { return calls.size(); }
  std::uint64_t total_instructions() const;
};

// Execution harness one workload run owns. Applies the transformer at every
// tracked site, classifies memory traffic through the cache model, and
// accumulates the CallTrace. Calls may not nest (target functions are
// leaf-level kernels).
class ExecutionContext {
 public:
  ExecutionContext(PrecisionFormat format, Transformer transformer,
                   const CacheConfig& cache_cfg);

  std::size_t begin_call(std::string_view static_fn, std::string_view label = "");
  void end_call();

  // Places a data region in the model address space (64B-aligned bases,
  // assigned in registration order). Cache classification works on model
  // addresses, so identical runs classify identically no matter where the
  // allocator put the arrays. Registering the same base twice is a no-op.
  void map_region(const void* base, std::size_t bytes);

  // Arithmetic whose operands all live in registers.
  template <class T>
  T fp_op(T result) {
    count(OperandCategory::RF);
    return apply(result);
  }

  // Arithmetic with explicit operand sources; the instruction is charged to
  // the most expensive source.
  template <class T>
  T fp_op(T result, std::initializer_list<OperandCategory> operand_sources) {
    OperandCategory cat = OperandCategory::RF;
    for (OperandCategory c : operand_sources)
      if (static_cast<int>(c) > static_cast<int>(cat)) cat = c;
    count(cat);
    return apply(result);
  }

  template <class T>
  T fp_load(const T& slot) {
    count(cache_.access(model_address(&slot), false));
    return apply(slot);
  }

  template <class T>
  void fp_store(T& slot, T value) {
    count(cache_.access(model_address(&slot), true));
    slot = apply(value);
  }

  // Models n non-FP instructions (address arithmetic, control) at RF cost;
  // never approximable, never transformed.
  void overhead(std::uint64_t n);

  // Throws if a call is still open; run_workload calls this at workload exit.
  void finish() const;

  const CallTrace& trace() const { return trace_; }
  CallTrace take_trace() { return std::move(trace_); }
  const CacheSim& cache() const { return cache_; }
  std::size_t current_call() const { return current_; }
  bool in_call() const { return in_call_; }

 private:
  enum class Mode { Identity, Truncate, Fault };

  template <class T>
  T apply(T v) {
    if (!in_call_) return v;
    switch (mode_) {
      case Mode::Identity:
        return v;
      case Mode::Truncate:
        return truncate_mantissa(v, current_k_);
      case Mode::Fault:
        return current_ == fault_target_ ? inject_fault(v, fault_) : v;
    }
    return v;
  }

  void count(OperandCategory cat) {
    auto& bucket = in_call_ ? trace_.per_call[current_] : trace_.ambient;
    auto& arr = in_call_ ? bucket.approximable : bucket.non_approximable;
    ++arr[static_cast<int>(cat)];
  }

  std::uint64_t model_address(const void* p);

  PrecisionFormat format_;
  Mode mode_ = Mode::Identity;
  std::vector<int> omitted_;
  MantissaFault fault_{};
  std::size_t fault_target_ = 0;

  struct Region {
    std::uintptr_t base;
    std::size_t bytes;
    std::uint64_t model_base;
  };

  CacheSim cache_;
  CallTrace trace_;
  std::vector<Region> regions_;
  std::uint64_t next_model_base_ = 0;
  // Unregistered addresses (stack temporaries in small harness uses) get
  // first-touch line slots from a disjoint high range.
  std::unordered_map<std::uint64_t, std::uint64_t> stray_lines_;
  bool in_call_ = false;
  std::size_t current_ = 0;
  int current_k_ = 0;
};

// RAII guard for one dynamic call.
class ScopedCall {
 public:
  ScopedCall(ExecutionContext& ctx, std::string_view static_fn,
             std::string_view label = "")
      : ctx_(ctx) {
    ctx_.begin_call(static_fn, label);
  }
  ~ScopedCall() { ctx_.end_call(); }
  ScopedCall(const ScopedCall&) = delete;
  ScopedCall& operator=(const ScopedCall&) = delete;

 private:
  ExecutionContext& ctx_;
};

}  // namespace dps
