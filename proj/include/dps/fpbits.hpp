#pragma once

#include <Eigen/Core>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dps {

// IEEE-754 layout of the two supported value widths. One sign bit; the rest
// splits into exponent and mantissa (fraction).
struct PrecisionFormat {
  enum class Kind { Single, Double };

  Kind kind;
  int mantissa_bits;
  int exponent_bits;
  int total_bits;

  static constexpr PrecisionFormat single_precision() {
    return {Kind::Single, 23, 8, 32};
  }
  static constexpr PrecisionFormat double_precision() {
    return {Kind::Double, 52, 11, 64};
  }

  const char* name() const {
    return kind == Kind::Single ? "single" : "double";
  }

  friend bool operator==(const PrecisionFormat&, const PrecisionFormat&) = default;
};

inline PrecisionFormat format_from_name(const std::string& name) {
  if (name == "single") return PrecisionFormat::single_precision();
  if (name == "double") return PrecisionFormat::double_precision();
  throw std::invalid_argument("unknown precision format: " + name);
}

enum class FaultPolarity { StuckAt0, StuckAt1 };

inline const char* to_string(FaultPolarity p) {
  return p == FaultPolarity::StuckAt0 ? "s0" : "s1";
}

// A single mantissa bit forced to a fixed value. bit_index counts from the
// least significant mantissa bit.
struct MantissaFault {
  int bit_index = 0;
  FaultPolarity polarity = FaultPolarity::StuckAt0;
};

template <class T>
struct FloatTraits;

template <>
struct FloatTraits<float> {
  using Bits = std::uint32_t;
  static constexpr int mantissa_bits = 23;
  static constexpr Bits mantissa_mask = 0x007FFFFFu;
  static constexpr PrecisionFormat format() {
    return PrecisionFormat::single_precision();
  }
};

template <>
struct FloatTraits<double> {
  using Bits = std::uint64_t;
  static constexpr int mantissa_bits = 52;
  static constexpr Bits mantissa_mask = 0x000FFFFFFFFFFFFFull;
  static constexpr PrecisionFormat format() {
    return PrecisionFormat::double_precision();
  }
};

// Clears the `omitted_bits` least significant mantissa bits. Sign and exponent
// are untouched; non-finite values pass through unchanged. This is pure bit
// clearing, not rounding, so |result| <= |x| and the operation is idempotent.
template <class T>
T truncate_mantissa(T x, int omitted_bits) {
  using Tr = FloatTraits<T>;
  if (omitted_bits < 0 || omitted_bits > Tr::mantissa_bits)
    throw std::invalid_argument("truncate_mantissa: omitted-bit count out of range");
  if (!std::isfinite(x)) return x;
  using B = typename Tr::Bits;
  const B low = omitted_bits == 0 ? B{0} : static_cast<B>((B{1} << omitted_bits) - 1);
  return std::bit_cast<T>(static_cast<B>(std::bit_cast<B>(x) & ~low));
}

// Forces one mantissa bit to 0 or 1. Non-finite values pass through unchanged
// (corrupting NaN payloads or the Inf mantissa would fabricate new classes of
// values the validity rule already excludes).
template <class T>
T inject_fault(T x, const MantissaFault& fault) {
  using Tr = FloatTraits<T>;
  if (fault.bit_index < 0 || fault.bit_index >= Tr::mantissa_bits)
    throw std::invalid_argument("inject_fault: mantissa bit index out of range");
  if (!std::isfinite(x)) return x;
  using B = typename Tr::Bits;
  B raw = std::bit_cast<B>(x);
  const B bit = static_cast<B>(B{1} << fault.bit_index);
  raw = fault.polarity == FaultPolarity::StuckAt0 ? static_cast<B>(raw & ~bit)
                                                  : static_cast<B>(raw | bit);
  return std::bit_cast<T>(raw);
}

// True iff every output data point is finite (no Inf, no NaN).
inline bool is_result_valid(const Eigen::ArrayXd& values) {
  return values.isFinite().all();
}

}  // namespace dps
