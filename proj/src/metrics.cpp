#include "dps/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dps {

AccuracySummary mean_relative_error(const Eigen::ArrayXd& approx,
                                    const Eigen::ArrayXd& golden) {
  if (approx.size() != golden.size())
    throw std::invalid_argument("mean_relative_error: length mismatch");
  if (!golden.isFinite().all())
    throw std::invalid_argument("mean_relative_error: golden run must be finite");

  AccuracySummary s;
  s.per_point.resize(approx.size());
  for (Eigen::Index i = 0; i < approx.size(); ++i) {
    const double a = approx[i];
    const double g = golden[i];
    double e;
    if (!std::isfinite(a)) {
      e = 1.0;
    } else if (g == 0.0) {
      e = (a == 0.0) ? 0.0 : 1.0;
    } else {
      e = std::min(1.0, std::abs(a - g) / std::abs(g));
    }
    s.per_point[i] = e;
  }
  s.mre = s.per_point.size() == 0 ? 0.0 : s.per_point.mean();
  return s;
}

Eigen::ArrayXd error_distribution(const AccuracySummary& summary,
                                  std::span<const double> thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (thresholds[i] <= thresholds[i - 1])
      throw std::invalid_argument("error_distribution: thresholds must ascend");

  Eigen::ArrayXd out(static_cast<Eigen::Index>(thresholds.size()));
  const double n = static_cast<double>(summary.per_point.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double below =
        static_cast<double>((summary.per_point < thresholds[t]).count());
    out[static_cast<Eigen::Index>(t)] = n == 0.0 ? 0.0 : below / n;
  }
  return out;
}

Eigen::ArrayXd histogram_buckets(const AccuracySummary& summary,
                                 std::span<const double> thresholds) {
  const Eigen::ArrayXd cumulative = error_distribution(summary, thresholds);
  Eigen::ArrayXd buckets(cumulative.size() + 1);
  double prev = 0.0;
  for (Eigen::Index i = 0; i < cumulative.size(); ++i) {
    buckets[i] = cumulative[i] - prev;
    prev = cumulative[i];
  }
  buckets[cumulative.size()] = 1.0 - prev;
  return buckets;
}

}  // namespace dps
