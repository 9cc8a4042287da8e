#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "dps/trace.hpp"

namespace dps {

// Energy per instruction (nJ) by operand-source category, measured at full
// precision. All values must be positive.
struct EpiTable {
  double rf = 0.45;
  double l1 = 0.88;
  double l2 = 7.72;
  double mem_rd = 52.14;
  double mem_wr = 62.14;

  double of(OperandCategory c) const {
    switch (c) {
      case OperandCategory::RF: return rf;
      case OperandCategory::L1: return l1;
      case OperandCategory::L2: return l2;
      case OperandCategory::MemRd: return mem_rd;
      case OperandCategory::MemWr: return mem_wr;
    }
    return rf;
  }
  void validate() const;  // throws invalid_argument unless all positive
};

// How EPI shrinks as mantissa bits are omitted. Both models are linear in the
// remaining operand width; they differ in the reference width. TotalWidth
// (default) scales by (total_bits - k) / total_bits, so even a fully omitted
// mantissa keeps paying for sign and exponent. MantissaWidth scales by
// (mantissa_bits - k) / mantissa_bits.
enum class EpiScaling { TotalWidth, MantissaWidth };

const char* to_string(EpiScaling s);
EpiScaling epi_scaling_from_name(const std::string& name);

// EPI of an instruction in category `cat` with k omitted mantissa bits.
double epi_scaled(OperandCategory cat, PrecisionFormat fmt, int omitted_bits,
                  const EpiTable& table, EpiScaling scaling = EpiScaling::TotalWidth);

struct EnergyReport {
  double total_nj = 0.0;
  double baseline_nj = 0.0;  // all-zero schedule, same trace
  double savings = 0.0;      // 1 - total/baseline (0 for an empty trace)
  Eigen::ArrayXd per_call_nj;
  std::array<double, kNumOperandCategories> per_category_nj{};
  double ambient_nj = 0.0;  // instructions outside any dynamic call
  EpiScaling scaling = EpiScaling::TotalWidth;
  EpiTable table;
  PrecisionFormat format = PrecisionFormat::double_precision();
};

// Energy of a trace replayed under a per-call omitted-bits schedule:
// approximable instructions pay the scaled EPI of their call, everything
// else pays full EPI. Schedule length must equal the trace call count.
EnergyReport energy_of_trace(const CallTrace& trace, const Eigen::ArrayXi& omitted,
                             const EpiTable& table = EpiTable{},
                             EpiScaling scaling = EpiScaling::TotalWidth);

}  // namespace dps
