#include "dps/policy.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dps/errors.hpp"

namespace dps {
namespace {

using nlohmann::json;

// Largest n in [0, bits] whose prefix is fully valid in rows `rows` and whose
// accumulated max-loss stays strictly below target in every one of them.
// Running sums are monotone, so the scan stops at the first violation; -1
// (no feasible n, e.g. target <= 0) clamps to 0.
int plan_row(const AccLossMatrices& m, std::initializer_list<Eigen::Index> rows,
             double target) {
  const Eigen::Index bits = m.num_bits();
  std::vector<double> sums(rows.size(), 0.0);
  int best = -1;
  for (Eigen::Index n = 0; n <= bits; ++n) {
    if (n > 0) {
      const Eigen::Index b = n - 1;
      bool all_valid = true;
      std::size_t r = 0;
      for (Eigen::Index i : rows) {
        if (!m.entry_valid(i, b)) {
          all_valid = false;
          break;
        }
        sums[r++] += m.max_loss(i, b);
      }
      if (!all_valid) break;
    }
    bool under = true;
    for (double s : sums)
      if (!(s < target)) {
        under = false;
        break;
      }
    if (!under) break;
    best = static_cast<int>(n);
  }
  return best < 0 ? 0 : best;
}

OmissionSchedule with_provenance(const AccLossMatrices& m, std::string policy,
                                 double target) {
  OmissionSchedule s;
  s.omitted.setZero(m.num_calls());
  s.policy = std::move(policy);
  s.target = target;
  s.matrix_fingerprint = m.fingerprint;
  s.static_fns = m.static_fns;
  return s;
}

}  // namespace

OmissionSchedule plan_dps(const AccLossMatrices& m, double target) {
  if (target < 0.0) throw std::invalid_argument("plan_dps: target must be >= 0");
  OmissionSchedule s = with_provenance(m, "dps", target);
  for (Eigen::Index i = 0; i < m.num_calls(); ++i)
    s.omitted[i] = plan_row(m, {i}, target);
  return s;
}

OmissionSchedule plan_dps_plus(const AccLossMatrices& m, double target) {
  if (target < 0.0) throw std::invalid_argument("plan_dps_plus: target must be >= 0");
  if (m.num_calls() < 1)
    throw std::invalid_argument("plan_dps_plus: need at least one call");
  OmissionSchedule s = with_provenance(m, "dps+", target);
  const Eigen::Index last = m.num_calls() - 1;
  for (Eigen::Index i = 0; i < last; ++i)
    s.omitted[i] = plan_row(m, {i, i + 1}, target);
  s.omitted[last] = plan_row(m, {last}, target);
  return s;
}

OmissionSchedule plan_sps(double fraction, int num_bits, int num_calls) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("plan_sps: fraction must be in [0, 1]");
  if (num_bits < 0 || num_calls < 0)
    throw std::invalid_argument("plan_sps: negative shape");
  OmissionSchedule s;
  s.policy = "sps";
  s.fraction = fraction;
  s.omitted.setConstant(num_calls,
                        static_cast<int>(std::ceil(fraction * num_bits)));
  return s;
}

OmissionSchedule plan_sps_plus(const AccLossMatrices& m, double target) {
  OmissionSchedule s = plan_dps(m, target);
  s.policy = "sps+";

  std::map<std::string, int> fn_min;
  for (Eigen::Index i = 0; i < s.num_calls(); ++i) {
    const std::string& fn = m.static_fns[static_cast<std::size_t>(i)];
    auto [it, inserted] = fn_min.emplace(fn, s.omitted[i]);
    if (!inserted) it->second = std::min(it->second, s.omitted[i]);
  }
  for (Eigen::Index i = 0; i < s.num_calls(); ++i)
    s.omitted[i] = fn_min.at(m.static_fns[static_cast<std::size_t>(i)]);
  return s;
}

void save_schedule(const OmissionSchedule& s, const std::string& path) {
  json j;
  j["provenance"] = {{"policy", s.policy},
                     {"target", s.target},
                     {"fraction", s.fraction},
                     {"matrix_fingerprint", s.matrix_fingerprint}};
  j["static_fns"] = s.static_fns;
  j["omitted"] = std::vector<int>(s.omitted.begin(), s.omitted.end());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write schedule: " + path);
  out << j.dump(2) << "\n";
}

OmissionSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schedule: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  OmissionSchedule s;
  try {
    s.policy = j.at("provenance").at("policy").get<std::string>();
    s.target = j.at("provenance").value("target", 0.0);
    s.fraction = j.at("provenance").value("fraction", 0.0);
    s.matrix_fingerprint =
        j.at("provenance").value("matrix_fingerprint", std::string{});
    s.static_fns = j.value("static_fns", std::vector<std::string>{});
    const auto omitted = j.at("omitted").get<std::vector<int>>();
    s.omitted.resize(static_cast<Eigen::Index>(omitted.size()));
    for (std::size_t i = 0; i < omitted.size(); ++i) {
      if (omitted[i] < 0)
        throw DataError(path + ": negative omitted-bit count");
      s.omitted[static_cast<Eigen::Index>(i)] = omitted[i];
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return s;
}

}  // namespace dps
