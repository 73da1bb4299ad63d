#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aesrank/census.hpp"
#include "aesrank/stats.hpp"

namespace aesrank {

// One labelled census -- the unit of the JSON and CSV interchange formats.
struct CensusRecord {
  std::string arm;              // "plain", "aes" or "random"
  std::uint32_t key_index = 0;  // trial number within the arm
  std::uint64_t seed = 0;
  unsigned rounds = 0;          // 0 for non-cipher arms
  std::vector<std::uint32_t> window_starts;
  RankCensus census;

  bool operator==(const CensusRecord&) const = default;
};

// Census JSON object: {arm, key_index, seed, rounds, window_starts,
// counts: {"<rank>": <count>}}.  Output is deterministic (sorted keys,
// fixed indentation), so identical records serialize byte-identically.
std::string census_to_json(const CensusRecord& record, int indent = 2);
CensusRecord census_from_json(std::string_view text);

// A JSON array of census objects, and its inverse.
std::string censuses_to_json(std::span<const CensusRecord> records, int indent = 2);
std::vector<CensusRecord> censuses_from_json(std::string_view text);

// Long-format CSV with header arm,key_index,rank,count and one row per
// (census, rank) pair, ranks ascending within a census.
std::string censuses_to_csv(std::span<const CensusRecord> records);

// Verdict JSON: bins, per-arm observed/expected/deviation, chi-square
// statistics and p-values, the cross-arm ratio and the verdict itself.
std::string report_to_json(const VerdictReport& report, int indent = 2);

// Plot-ready CSV of per-sample low-rank counts (ranks <= n-2), one row per
// census, each arm sorted by ascending count, with the per-census expected
// count as a reference column.  Header:
//   arm,sample_order,low_rank_count,expected_low_rank
std::string plot_csv(std::span<const CensusRecord> records, std::size_t n);

}  // namespace aesrank
