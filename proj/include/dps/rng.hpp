#pragma once

#include <cstdint>
#include <random>

namespace dps {

// Deterministic random source for embedded workload inputs. mt19937_64 has a
// standard-mandated sequence; the real-valued helpers below avoid
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, n). Modulo bias is irrelevant at workbench scales.
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  // Cheap bell-shaped noise (Irwin-Hall with 3 terms), zero mean, libm-free.
  double noise(double scale) { return (unit() + unit() + unit() - 1.5) * scale; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dps
