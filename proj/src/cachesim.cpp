#include "dps/cachesim.hpp"

#include <algorithm>
#include <stdexcept>

namespace dps {

const char* to_string(OperandCategory c) {
  switch (c) {
    case OperandCategory::RF: return "rf";
    case OperandCategory::L1: return "l1";
    case OperandCategory::L2: return "l2";
    case OperandCategory::MemRd: return "mem_rd";
    case OperandCategory::MemWr: return "mem_wr";
  }
  return "?";
}

void CacheConfig::validate() const {
  if (line_size == 0 || (line_size & (line_size - 1)) != 0)
    throw std::invalid_argument("cache: line_size must be a power of two");
  if (l1_assoc <= 0 || l2_assoc <= 0)
    throw std::invalid_argument("cache: associativity must be positive");
  if (l1_size == 0 || l1_size % (line_size * static_cast<std::size_t>(l1_assoc)) != 0)
    throw std::invalid_argument("cache: l1_size not divisible by line_size*l1_assoc");
  if (l2_size == 0 || l2_size % (line_size * static_cast<std::size_t>(l2_assoc)) != 0)
    throw std::invalid_argument("cache: l2_size not divisible by line_size*l2_assoc");
  if (l2_size <= l1_size)
    throw std::invalid_argument("cache: l2_size must exceed l1_size");
}

void CacheSim::Level::init(std::size_t size, std::size_t line_size, int assoc_ways) {
  assoc = static_cast<std::size_t>(assoc_ways);
  num_sets = size / (line_size * assoc);
  sets.assign(num_sets, {});
}

bool CacheSim::Level::touch(std::uint64_t line) {
  auto& set = sets[line % num_sets];
  auto it = std::find(set.begin(), set.end(), line);
  if (it == set.end()) return false;
  set.erase(it);
  set.push_back(line);
  return true;
}

bool CacheSim::Level::insert(std::uint64_t line, std::uint64_t* evicted) {
  auto& set = sets[line % num_sets];
  bool evict = set.size() >= assoc;
  if (evict) {
    *evicted = set.front();
    set.erase(set.begin());
  }
  set.push_back(line);
  return evict;
}

void CacheSim::Level::invalidate(std::uint64_t line) {
  auto& set = sets[line % num_sets];
  auto it = std::find(set.begin(), set.end(), line);
  if (it != set.end()) set.erase(it);
}

bool CacheSim::Level::contains(std::uint64_t line) const {
  const auto& set = sets[line % num_sets];
  return std::find(set.begin(), set.end(), line) != set.end();
}

void CacheSim::Level::clear() {
  for (auto& set : sets) set.clear();
}

CacheSim::CacheSim(const CacheConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  l1_.init(cfg_.l1_size, cfg_.line_size, cfg_.l1_assoc);
  l2_.init(cfg_.l2_size, cfg_.line_size, cfg_.l2_assoc);
}

OperandCategory CacheSim::access(std::uint64_t addr, bool is_write) {
  ++stats_.accesses;
  const std::uint64_t line = addr / cfg_.line_size;

  if (l1_.touch(line)) {
    ++stats_.l1_hits;
    return OperandCategory::L1;
  }

  std::uint64_t evicted = 0;
  if (l2_.touch(line)) {
    ++stats_.l2_hits;
    l1_.insert(line, &evicted);  // L1 victim drops silently (no dirty state modeled)
    return OperandCategory::L2;
  }

  // Miss to memory: fill both levels, write-allocate. An L2 victim is
  // back-invalidated from L1 to preserve inclusion.
  if (l2_.insert(line, &evicted)) l1_.invalidate(evicted);
  l1_.insert(line, &evicted);
  if (is_write) {
    ++stats_.mem_writes;
    return OperandCategory::MemWr;
  }
  ++stats_.mem_reads;
  return OperandCategory::MemRd;
}

void CacheSim::reset() {
  l1_.clear();
  l2_.clear();
  stats_ = Stats{};
}

bool CacheSim::inclusion_holds() const {
  for (const auto& set : l1_.sets)
    for (std::uint64_t line : set)
      if (!l2_.contains(line)) return false;
  return true;
}

}  // namespace dps
