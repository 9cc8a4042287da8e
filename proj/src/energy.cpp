#include "dps/energy.hpp"

#include <stdexcept>

namespace dps {

void EpiTable::validate() const {
  for (int c = 0; c < kNumOperandCategories; ++c)
    if (!(of(static_cast<OperandCategory>(c)) > 0.0))
      throw std::invalid_argument("EPI values must all be positive");
}

const char* to_string(EpiScaling s) {
  return s == EpiScaling::TotalWidth ? "total" : "mantissa";
}

EpiScaling epi_scaling_from_name(const std::string& name) {
  if (name == "total") return EpiScaling::TotalWidth;
  if (name == "mantissa") return EpiScaling::MantissaWidth;
  throw std::invalid_argument("unknown epi scaling model: " + name);
}

double epi_scaled(OperandCategory cat, PrecisionFormat fmt, int omitted_bits,
                  const EpiTable& table, EpiScaling scaling) {
  if (omitted_bits < 0 || omitted_bits > fmt.mantissa_bits)
    throw std::invalid_argument("epi_scaled: omitted bits outside [0, mantissa_bits]");
  const double width = scaling == EpiScaling::TotalWidth
                           ? static_cast<double>(fmt.total_bits)
                           : static_cast<double>(fmt.mantissa_bits);
  return table.of(cat) * (width - omitted_bits) / width;
}

EnergyReport energy_of_trace(const CallTrace& trace, const Eigen::ArrayXi& omitted,
                             const EpiTable& table, EpiScaling scaling) {
  table.validate();
  if (static_cast<std::size_t>(omitted.size()) != trace.num_calls())
    throw std::invalid_argument("energy_of_trace: schedule length != call count");

  EnergyReport rep;
  rep.scaling = scaling;
  rep.table = table;
  rep.format = trace.format;
  rep.per_call_nj.setZero(omitted.size());

  auto accumulate = [&](const Eigen::ArrayXi& sched, EnergyReport* out) {
    double total = 0.0;
    for (std::size_t i = 0; i < trace.num_calls(); ++i) {
      const auto& counts = trace.per_call[i];
      double call_nj = 0.0;
      for (int c = 0; c < kNumOperandCategories; ++c) {
        const auto cat = static_cast<OperandCategory>(c);
        const double nj =
            static_cast<double>(counts.non_approximable[c]) * table.of(cat) +
            static_cast<double>(counts.approximable[c]) *
                epi_scaled(cat, trace.format, sched[static_cast<Eigen::Index>(i)],
                           table, scaling);
        call_nj += nj;
        if (out) out->per_category_nj[c] += nj;
      }
      if (out) out->per_call_nj[static_cast<Eigen::Index>(i)] = call_nj;
      total += call_nj;
    }
    double ambient = 0.0;
    for (int c = 0; c < kNumOperandCategories; ++c) {
      const auto cat = static_cast<OperandCategory>(c);
      const double nj = static_cast<double>(trace.ambient.non_approximable[c] +
                                            trace.ambient.approximable[c]) *
                        table.of(cat);
      ambient += nj;
      if (out) out->per_category_nj[c] += nj;
    }
    if (out) out->ambient_nj = ambient;
    return total + ambient;
  };

  rep.total_nj = accumulate(omitted, &rep);
  const Eigen::ArrayXi zeros = Eigen::ArrayXi::Zero(omitted.size());
  rep.baseline_nj = accumulate(zeros, nullptr);
  rep.savings = rep.baseline_nj == 0.0 ? 0.0 : 1.0 - rep.total_nj / rep.baseline_nj;
  return rep;
}

}  // namespace dps
