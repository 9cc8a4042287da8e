#include "dps/trace.hpp"

#include <stdexcept>

#include "dps/errors.hpp"

namespace dps {

std::uint64_t CallTrace::total_instructions() const {
  std::uint64_t t = ambient.total();
  for (const auto& c : per_call) t += c.total();
  return t;
}

ExecutionContext::ExecutionContext(PrecisionFormat format, Transformer transformer,
                                   const CacheConfig& cache_cfg)
    : format_(format), cache_(cache_cfg) {
  trace_.format = format;
  if (auto* t = std::get_if<TruncateTransform>(&transformer)) {
    mode_ = Mode::Truncate;
    omitted_ = std::move(t->omitted_per_call);
    for (int k : omitted_)
      if (k < 0 || k > format_.mantissa_bits)
        throw std::invalid_argument("schedule entry outside [0, mantissa_bits]");
  } else if (auto* f = std::get_if<FaultTransform>(&transformer)) {
    mode_ = Mode::Fault;
    fault_ = f->fault;
    fault_target_ = f->target_call;
    if (fault_.bit_index < 0 || fault_.bit_index >= format_.mantissa_bits)
      throw std::invalid_argument("fault bit outside the active format");
  }
}

std::size_t ExecutionContext::begin_call(std::string_view static_fn,
                                         std::string_view label) {
  if (in_call_)
    throw std::logic_error("begin_call: dynamic calls may not nest");
  const std::size_t index = trace_.calls.size();
  if (mode_ == Mode::Truncate) {
    if (index >= omitted_.size())
      throw DataError("schedule has fewer entries than the run has dynamic calls");
    current_k_ = omitted_[index];
  }
  trace_.calls.push_back(DynamicCall{index, std::string(static_fn),
                                     std::string(label.empty() ? static_fn : label)});
  trace_.per_call.emplace_back();
  current_ = index;
  in_call_ = true;
  return index;
}

void ExecutionContext::end_call() {
  if (!in_call_) throw std::logic_error("end_call: no open dynamic call");
  in_call_ = false;
}

void ExecutionContext::map_region(const void* base, std::size_t bytes) {
  const auto b = reinterpret_cast<std::uintptr_t>(base);
  for (const auto& r : regions_)
    if (r.base == b) return;
  regions_.push_back({b, bytes, next_model_base_});
  const std::uint64_t line = cache_.config().line_size;
  next_model_base_ += ((bytes + line - 1) / line + 1) * line;  // pad to a line gap
}

std::uint64_t ExecutionContext::model_address(const void* p) {
  const auto addr = reinterpret_cast<std::uintptr_t>(p);
  for (const auto& r : regions_)
    if (addr >= r.base && addr < r.base + r.bytes)
      return r.model_base + (addr - r.base);

  const std::uint64_t line = cache_.config().line_size;
  const std::uint64_t key = addr / line;
  const auto [it, inserted] =
      stray_lines_.try_emplace(key, (1ull << 40) + stray_lines_.size() * line);
  return it->second + addr % line;
}

void ExecutionContext::overhead(std::uint64_t n) {
  auto& bucket = in_call_ ? trace_.per_call[current_] : trace_.ambient;
  bucket.non_approximable[static_cast<int>(OperandCategory::RF)] += n;
}

void ExecutionContext::finish() const {
  if (in_call_)
    throw std::logic_error("workload exited with an open dynamic call");
}

}  // namespace dps
