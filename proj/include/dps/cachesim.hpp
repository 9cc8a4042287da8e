#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dps {

// Operand-source categories, ordered by distance from the core. Arithmetic on
// register operands is RF; data accesses are classified by the level that
// serves them.
enum class OperandCategory : int { RF = 0, L1, L2, MemRd, MemWr };

inline constexpr int kNumOperandCategories = 5;

const char* to_string(OperandCategory c);

// Two-level data cache geometry. The capacities model a Xeon-Phi-like core;
// line size, associativity and replacement are declared defaults (LRU,
// inclusive, write-allocate).
struct CacheConfig {
  std::size_t l1_size = 32 * 1024;
  std::size_t l2_size = 512 * 1024;
  std::size_t line_size = 64;
  int l1_assoc = 8;
  int l2_assoc = 16;

  void validate() const;  // throws std::invalid_argument on bad geometry
};

// Inclusive two-level LRU cache. Single owner per workload execution; distinct
// executions use distinct instances.
class CacheSim {
 public:
  struct Stats {
    std::uint64_t accesses = 0;
    std::uint64_t l1_hits = 0;
    std::uint64_t l2_hits = 0;
    std::uint64_t mem_reads = 0;
    std::uint64_t mem_writes = 0;
  };

  explicit CacheSim(const CacheConfig& cfg = CacheConfig{});

  // Classifies one access and updates LRU state. Hits (read or write) are
  // charged to the level that serves them; only misses all the way to memory
  // split into MemRd/MemWr.
  OperandCategory access(std::uint64_t addr, bool is_write);

  // Drops all cached lines and zeroes the counters.
  void reset();

  const Stats& stats() const { return stats_; }
  const CacheConfig& config() const { return cfg_; }

  // Audit: every line resident in L1 must also be resident in L2.
  bool inclusion_holds() const;

 private:
  struct Level {
    std::size_t num_sets = 0;
    std::size_t assoc = 0;
    // Per set, line numbers ordered LRU-first.
    std::vector<std::vector<std::uint64_t>> sets;

    void init(std::size_t size, std::size_t line_size, int assoc_ways);
    bool touch(std::uint64_t line);                 // hit -> promote to MRU
    bool insert(std::uint64_t line, std::uint64_t* evicted);
    void invalidate(std::uint64_t line);
    bool contains(std::uint64_t line) const;
    void clear();
  };

  CacheConfig cfg_;
  Level l1_, l2_;
  Stats stats_;
};

}  // namespace dps
