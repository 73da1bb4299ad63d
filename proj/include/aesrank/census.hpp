#pragma once

#include <cstdint>
#include <map>

namespace aesrank {

// Sparse rank census: for each observed rank, the number of windows that
// produced it.  Ranks that never occur are simply absent.
struct RankCensus {
  std::map<std::uint32_t, std::uint64_t> counts;

  void add(std::uint32_t rank, std::uint64_t k = 1) { counts[rank] += k; }

  void merge(const RankCensus& other) {
    for (const auto& [rank, count] : other.counts) counts[rank] += count;
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [rank, count] : counts) t += count;
    return t;
  }

  bool operator==(const RankCensus&) const = default;
};

}  // namespace aesrank
