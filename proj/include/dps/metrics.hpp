#pragma once

#include <Eigen/Core>
#include <span>

namespace dps {

// Accuracy loss of a degraded output vector against the full-precision golden
// run. Per-point relative errors are capped at 1 (a totally inaccurate point);
// a non-finite point counts as 1.
struct AccuracySummary {
  double mre = 0.0;          // mean of per_point
  Eigen::ArrayXd per_point;  // capped relative error of each data point
};

// Per-point rule: non-finite approx -> 1; golden 0 and approx 0 -> 0;
// golden 0 and approx != 0 -> 1; otherwise min(1, |a-g|/|g|).
// Golden must be finite and of equal length.
AccuracySummary mean_relative_error(const Eigen::ArrayXd& approx,
                                    const Eigen::ArrayXd& golden);

// Fraction of points strictly below each threshold (thresholds ascending).
Eigen::ArrayXd error_distribution(const AccuracySummary& summary,
                                  std::span<const double> thresholds);

// Density view of the same distribution: fractions of points falling in
// [0,t0), [t0,t1), ..., [t_last, inf]. Sums to 1.
Eigen::ArrayXd histogram_buckets(const AccuracySummary& summary,
                                 std::span<const double> thresholds);

}  // namespace dps
