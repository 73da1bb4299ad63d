#include "aesrank/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace aesrank {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

ordered census_to_value(const CensusRecord& r) {
  ordered counts = ordered::object();
  for (const auto& [rank, count] : r.census.counts) {
    counts[std::to_string(rank)] = count;
  }
  ordered v = ordered::object();
  v["arm"] = r.arm;
  v["key_index"] = r.key_index;
  v["seed"] = r.seed;
  v["rounds"] = r.rounds;
  v["window_starts"] = r.window_starts;
  v["counts"] = std::move(counts);
  return v;
}

CensusRecord census_from_value(const json& v) {
  CensusRecord r;
  r.arm = v.at("arm").get<std::string>();
  r.key_index = v.at("key_index").get<std::uint32_t>();
  r.seed = v.at("seed").get<std::uint64_t>();
  r.rounds = v.at("rounds").get<unsigned>();
  r.window_starts = v.at("window_starts").get<std::vector<std::uint32_t>>();
  for (const auto& [key, count] : v.at("counts").items()) {
    std::size_t pos = 0;
    const unsigned long rank = std::stoul(key, &pos);
    if (pos != key.size()) {
      throw std::invalid_argument("census counts: non-numeric rank key '" + key + "'");
    }
    r.census.add(static_cast<std::uint32_t>(rank), count.get<std::uint64_t>());
  }
  return r;
}

std::vector<const CensusRecord*> arm_records(std::span<const CensusRecord> records,
                                             std::string_view arm) {
  std::vector<const CensusRecord*> out;
  for (const CensusRecord& r : records) {
    if (r.arm == arm) out.push_back(&r);
  }
  return out;
}

std::uint64_t low_rank_count(const RankCensus& census, std::size_t n) {
  std::uint64_t low = 0;
  for (const auto& [rank, count] : census.counts) {
    if (n >= 2 && rank <= n - 2) low += count;
  }
  return low;
}

}  // namespace

std::string census_to_json(const CensusRecord& record, int indent) {
  return census_to_value(record).dump(indent) + "\n";
}

CensusRecord census_from_json(std::string_view text) {
  return census_from_value(json::parse(text));
}

std::string censuses_to_json(std::span<const CensusRecord> records, int indent) {
  ordered arr = ordered::array();
  for (const CensusRecord& r : records) arr.push_back(census_to_value(r));
  return arr.dump(indent) + "\n";
}

std::vector<CensusRecord> censuses_from_json(std::string_view text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) {
    throw std::invalid_argument("censuses_from_json: expected a JSON array");
  }
  std::vector<CensusRecord> out;
  out.reserve(arr.size());
  for (const json& v : arr) out.push_back(census_from_value(v));
  return out;
}

std::string censuses_to_csv(std::span<const CensusRecord> records) {
  std::ostringstream out;
  out << "arm,key_index,rank,count\n";
  for (const CensusRecord& r : records) {
    for (const auto& [rank, count] : r.census.counts) {
      out << r.arm << ',' << r.key_index << ',' << rank << ',' << count << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const VerdictReport& report, int indent) {
  const auto arm_value = [&](const ArmSummary& arm, const std::vector<double>& expected) {
    ordered v = ordered::object();
    v["windows"] = arm.windows;
    v["observed"] = arm.observed;
    v["expected"] = expected;
    v["deviation"] = arm.deviation;
    v["chi2"] = arm.chi2.statistic;
    v["df"] = arm.chi2.df;
    v["p_value"] = arm.chi2.p_value;
    v["significant"] = arm.chi2.significant;
    return v;
  };

  ordered v = ordered::object();
  v["n"] = report.n;
  v["bins"] = report.bin_labels;
  v["threshold"] = report.threshold;
  v["aes"] = arm_value(report.aes, report.expected_aes);
  v["random"] = arm_value(report.random, report.expected_random);
  v["ratio"] = report.ratio;
  v["verdict"] = report.distinguished ? "distinguished" : "not-distinguished";
  return v.dump(indent) + "\n";
}

std::string plot_csv(std::span<const CensusRecord> records, std::size_t n) {
  const RankDistribution dist = square_rank_distribution(n);
  std::ostringstream out;
  out << "arm,sample_order,low_rank_count,expected_low_rank\n";

  for (const std::string_view arm : {std::string_view("plain"), std::string_view("aes"),
                                     std::string_view("random")}) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> samples;  // (low count, total)
    for (const CensusRecord* r : arm_records(records, arm)) {
      samples.emplace_back(low_rank_count(r->census, n), r->census.total());
    }
    if (samples.empty()) continue;
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double expected = static_cast<double>(samples[i].second) * dist.p_tail;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", expected);
      out << arm << ',' << i << ',' << samples[i].first << ',' << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace aesrank
