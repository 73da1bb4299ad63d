// Acceptance gate for the rank-census artifact.  Each numbered criterion
// prints exactly one PASS/FAIL line with the measured values; the binary
// exits 0 only if every criterion passes.
//
// The expensive criteria are the deterministic rank facts (minutes) and the
// two-baseline statistical run (a few hours on one desktop core); everything
// else is instantaneous.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aesrank/aes.hpp"
#include "aesrank/distinguisher.hpp"
#include "aesrank/embedding.hpp"
#include "aesrank/pluq.hpp"
#include "aesrank/serialize.hpp"
#include "aesrank/stats.hpp"
#include "oracles.hpp"

using namespace aesrank;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string census_brief(const RankCensus& c) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [rank, count] : c.counts) {
    if (!first) out << ", ";
    out << rank << ":" << count;
    first = false;
  }
  out << '}';
  return out.str();
}

const char* order_name(PairOrder order) {
  return order == PairOrder::kByte15Dominant ? "primary" : "fallback";
}

// The fixed cipher key used by the deterministic rank facts: trial 0 of the
// seed-1 experiment stream, i.e. what `--seed 1` would draw first.
CipherKey rank_fact_key() {
  const CtrPrng prng(1);
  std::vector<std::uint8_t> kb(16);
  prng.fill(prng_domain::kExperimentKeys, 0, kb);
  return CipherKey::schedule(kb);
}

OrderedSet arm_set(PairOrder order, unsigned rounds, const CipherKey& key) {
  OrderedSet set = build_sbar(order);
  if (rounds == 0) return set;
  return encrypt_set(set, key, RoundSpec::reduced(rounds));
}

// --- criterion 1: window rank facts, with byte-convention arbitration ----

struct WindowFact {
  const char* name;
  unsigned rounds;  // 0 = the plain chosen set
  std::uint32_t rank;
};

constexpr WindowFact kWindowFacts[] = {
    {"plain", 0, 4690}, {"1-round", 1, 4690}, {"2-round", 2, 20548}, {"3-round", 3, 31661}};

bool windows_match(PairOrder order, const CipherKey& key, std::string& failure) {
  const std::vector<std::uint32_t> starts = evenly_spaced_starts(8);
  for (const WindowFact& fact : kWindowFacts) {
    const RankCensus census = algorithm_b(arm_set(order, fact.rounds, key), starts);
    const RankCensus want{{{fact.rank, starts.size()}}};
    if (census != want) {
      failure = std::string(fact.name) + " windows gave " + census_brief(census) +
                ", wanted " + census_brief(want);
      return false;
    }
  }
  return true;
}

Outcome criterion1(PairOrder& chosen) {
  const CipherKey key = rank_fact_key();
  std::string primary_failure;
  if (windows_match(PairOrder::kByte15Dominant, key, primary_failure)) {
    chosen = PairOrder::kByte15Dominant;
    return {true,
            "8 evenly spaced windows each: plain=4690, 1-round=4690, 2-round=20548, "
            "3-round=31661 (primary byte convention)"};
  }
  std::string fallback_failure;
  if (windows_match(PairOrder::kByte16Dominant, key, fallback_failure)) {
    chosen = PairOrder::kByte16Dominant;
    return {true, "fallback byte convention matched all window facts (primary: " +
                      primary_failure + ")"};
  }
  return {false, "primary: " + primary_failure + "; fallback: " + fallback_failure};
}

// --- criterion 2: span dimensions of the full embedded sets --------------

Outcome criterion2(PairOrder order) {
  const CipherKey key = rank_fact_key();
  const EmbeddingParams& params = EmbeddingParams::aes();
  constexpr WindowFact kSpanFacts[] = {
      {"plain", 0, 4821}, {"2-round", 2, 20679}, {"3-round", 3, 31681}, {"4-round", 4, 31745}};
  std::ostringstream detail;
  for (const WindowFact& fact : kSpanFacts) {
    BitMatrix embedded = embed_set(arm_set(order, fact.rounds, key), params);
    const std::size_t dim = gf2_rank_destructive(embedded);
    if (dim != fact.rank) {
      return {false, std::string("span(") + fact.name + ") = " + std::to_string(dim) +
                         ", wanted " + std::to_string(fact.rank)};
    }
    if (detail.tellp() > 0) detail << ", ";
    detail << "span(" << fact.name << ")=" << dim;
  }
  return {true, detail.str() + " over all 65536 embedded rows"};
}

// --- criterion 3: closed-form theory --------------------------------------

Outcome criterion3() {
  const RankDistribution dist = square_rank_distribution(kWindowRows);
  const double tail_delta = std::abs(dist.p_tail - 0.1336357);
  if (tail_delta > 1e-6) {
    return {false, "P(rank <= n-2) = " + std::to_string(dist.p_tail) +
                       " is off the pinned 0.1336357 by more than 1e-6"};
  }

  const std::vector<double> expected =
      expected_census(kNumWindows, three_bins(kWindowRows), kWindowRows);
  const long long rounded[3] = {std::llround(expected[0]), std::llround(expected[1]),
                                std::llround(expected[2])};
  if (rounded[0] != 9759 || rounded[1] != 19517 || rounded[2] != 4516) {
    return {false, "3-bin expected census over 33792 windows rounded to (" +
                       std::to_string(rounded[0]) + ", " + std::to_string(rounded[1]) + ", " +
                       std::to_string(rounded[2]) + "), wanted (9759, 19517, 4516)"};
  }

  for (unsigned n = 1; n <= 6; ++n) {
    const auto counts = oracle::exact_rank_counts(n);
    const RankDistribution d = square_rank_distribution(n);
    for (unsigned r = 0; r <= n; ++r) {
      const double exact = std::ldexp(double(counts[r]), -int(n * n));
      if (d.full[r] != exact) {
        return {false, "P(rank=" + std::to_string(r) + ") for n=" + std::to_string(n) +
                           " differs from exhaustive enumeration"};
      }
    }
  }
  return {true, "P(rank<=n-2) = 0.1336357 (|delta| < 1e-6), 3-bin census (9759, 19517, "
                "4516), n<=6 distribution equals enumeration exactly"};
}

// --- criterion 4: chi-square on the published census counts ---------------

Outcome criterion4() {
  std::ostringstream detail;
  for (const oracle::PublishedCase& pub : oracle::kPublishedCases) {
    std::uint64_t total = 0;
    for (std::uint64_t o : pub.observed) total += o;
    const auto bins =
        pub.observed.size() == 2 ? two_bins(kWindowRows) : three_bins(kWindowRows);
    const ChiSquareResult res =
        chi_square(pub.observed, expected_census(total, bins, kWindowRows));
    const double rel = std::abs(res.p_value - pub.quoted_p) / pub.quoted_p;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%s: p=%.4g vs %.4g", detail.tellp() > 0 ? ", " : "",
                  pub.name, res.p_value, pub.quoted_p);
    detail << buf;
    if (rel > 0.15) {
      return {false, std::string(pub.name) + ": p = " + std::to_string(res.p_value) +
                         " deviates more than 15% from the quoted " +
                         std::to_string(pub.quoted_p)};
    }
  }
  return {true, detail.str() + " (all within 15%)"};
}

// --- criterion 5: the GF(2) engine against naive oracles -------------------

Outcome criterion5() {
  oracle::SplitMix64 rng(5001);

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t r = 1 + rng.below(64);
    const std::size_t c = 1 + rng.below(64);
    const BitMatrix m = oracle::random_matrix(rng, r, c);
    if (gf2_rank(m) != oracle::naive_rank(m)) {
      return {false, "rank mismatch vs naive elimination at trial " + std::to_string(trial)};
    }
  }

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng.below(256);
    const std::size_t k = 1 + rng.below(256);
    const std::size_t c = 1 + rng.below(256);
    const BitMatrix a = oracle::random_matrix(rng, r, k);
    const BitMatrix b = oracle::random_matrix(rng, k, c);
    if (m4rm_multiply(a, b) != oracle::schoolbook_multiply(a, b)) {
      return {false, "table multiply mismatch vs schoolbook at trial " + std::to_string(trial)};
    }
  }

  const std::size_t thresholds[] = {8, 64, 512, kNoBlocking};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t r = 1 + rng.below(160);
    const std::size_t c = 1 + rng.below(160);
    const BitMatrix m = oracle::random_matrix(rng, r, c);
    const std::size_t base = gf2_rank(m, thresholds[0]);
    for (std::size_t t = 1; t < 4; ++t) {
      if (gf2_rank(m, thresholds[t]) != base) {
        return {false, "rank depends on the blocking threshold at trial " +
                           std::to_string(trial)};
      }
    }
  }
  return {true, "rank = naive oracle on 1000 matrices <= 64x64, multiply = schoolbook on "
                "200 pairs <= 256x256, rank invariant across thresholds {8, 64, 512, inf} "
                "on 500 matrices"};
}

// --- criterion 6: the cipher core ------------------------------------------

Outcome criterion6() {
  for (const oracle::CipherVector& v : oracle::kCipherVectors) {
    const CipherKey key = CipherKey::schedule(bytes_from_hex(v.key));
    const Block out = encrypt(key, block_from_hex(v.plain));
    if (to_hex(out) != v.cipher) {
      return {false, std::string("published vector failed for key ") + v.key};
    }
  }

  const BitMatrix m = lambda_matrix();
  const BitMatrix id = BitMatrix::identity(128);
  BitMatrix p = id;
  unsigned order = 0;
  for (unsigned j = 1; j <= 8; ++j) {
    p = m4rm_multiply(p, m);
    if (p == id) {
      order = j;
      break;
    }
  }
  if (order != 8) {
    return {false, "mixing matrix order is " + std::to_string(order) + ", wanted 8"};
  }

  bool seen[256] = {};
  for (int i = 0; i < 256; ++i) seen[sbox(std::uint8_t(i))] = true;
  for (int i = 0; i < 256; ++i) {
    if (!seen[i]) return {false, "s-box misses the value " + std::to_string(i)};
  }
  return {true, "4 published vectors exact (128/192/256-bit keys), mixing matrix has "
                "order 8, s-box is a permutation"};
}

// --- criterion 7: the desk-scale statistical run ----------------------------

Outcome criterion7() {
  const std::uint64_t seed = 2026;
  const std::uint32_t sets = 2;
  const std::vector<std::uint32_t> starts = evenly_spaced_starts(512);
  std::size_t done = 0;
  const std::size_t total = 2 * sets * starts.size();

  const auto execute = [&] {
    const CtrPrng prng(seed);
    std::vector<CensusRecord> records;
    for (std::uint32_t i = 0; i < sets; ++i) {
      RankCensus census =
          algorithm_b(random_sample_set(prng, i), starts, kDefaultBlockCols, 1, [&] {
            if (++done % 128 == 0) {
              std::fprintf(stderr, "  criterion 7: ranked %zu/%zu windows\n", done, total);
            }
          });
      records.push_back({"random", i, seed, 0, starts, std::move(census)});
    }
    return censuses_to_json(records);
  };

  const std::string first = execute();
  const std::string second = execute();
  if (first != second || first.empty()) {
    return {false, "two executions of the seed-" + std::to_string(seed) +
                       " run were not byte-identical"};
  }

  RankCensus pooled;
  for (const CensusRecord& r : censuses_from_json(first)) pooled.merge(r.census);
  const std::vector<std::uint64_t> observed = bin_census(pooled, three_bins(kWindowRows));
  const RankDistribution dist = square_rank_distribution(kWindowRows);
  const double probs[3] = {dist.p_full, dist.p_second, dist.p_tail};
  const double n = double(pooled.total());

  std::ostringstream detail;
  detail << "pooled 3-bin census (" << observed[0] << ", " << observed[1] << ", "
         << observed[2] << ") of " << pooled.total() << " windows";
  for (int i = 0; i < 3; ++i) {
    const double expected = n * probs[i];
    const double sigma = std::sqrt(n * probs[i] * (1.0 - probs[i]));
    if (std::abs(double(observed[i]) - expected) > 3.0 * sigma) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "bin %d: observed %llu vs expected %.1f exceeds 3 sigma (%.1f)", i,
                    (unsigned long long)observed[i], expected, 3.0 * sigma);
      return {false, buf};
    }
  }
  detail << " within 3 sigma of theory; both executions byte-identical ("
         << first.size() << " bytes)";
  return {true, detail.str()};
}

// --- criterion 8: degenerate cases ------------------------------------------

Outcome criterion8() {
  if (gf2_rank(BitMatrix()) != 0 || gf2_rank(BitMatrix(0, 7)) != 0 ||
      gf2_rank(BitMatrix(7, 0)) != 0 || pluq_decompose(BitMatrix()).rank != 0) {
    return {false, "an empty matrix did not report rank 0"};
  }

  bool rejected = false;
  try {
    ExperimentConfig cfg;
    cfg.tau = 0;
    (void)run_experiment(cfg);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  if (!rejected) return {false, "tau = 0 was not rejected"};

  oracle::SplitMix64 rng(8001);
  for (const std::size_t key_len : {std::size_t(16), std::size_t(24), std::size_t(32)}) {
    std::vector<std::uint8_t> kb(key_len);
    for (auto& b : kb) b = std::uint8_t(rng.next());
    const CipherKey key = CipherKey::schedule(kb);
    for (int trial = 0; trial < 8; ++trial) {
      Block in;
      for (auto& b : in) b = std::uint8_t(rng.next());
      const Block out = encrypt(key, in, RoundSpec::reduced(0));
      const Block white = sigma(in, key.round_key(0));
      if (out != white) {
        return {false, "0-round encryption differs from whitening for a " +
                           std::to_string(key_len) + "-byte key"};
      }
    }
  }
  return {true, "empty matrices rank 0, tau=0 rejected, 0-round encryption equals "
                "whitening for 16/24/32-byte keys"};
}

template <typename Fn>
Outcome guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("unexpected exception: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  // With no arguments every criterion runs; listing ids (e.g. `acceptance 1 2 8`)
  // restricts the run to that subset, which is handy while iterating locally.
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  const auto enabled = [&](int id) { return wanted.empty() || wanted.count(id) != 0; };

  int passed = 0;
  int ran = 0;
  const auto report = [&](int id, auto&& fn) {
    if (!enabled(id)) return;
    ++ran;
    const Outcome o = guarded(fn);
    std::printf("criterion %d: %s - %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (o.pass) ++passed;
  };

  PairOrder chosen = PairOrder::kByte15Dominant;
  report(1, [&] { return criterion1(chosen); });
  report(2, [&] { return criterion2(chosen); });
  report(3, [] { return criterion3(); });
  report(4, [] { return criterion4(); });
  report(5, [] { return criterion5(); });
  report(6, [] { return criterion6(); });
  report(7, [] { return criterion7(); });
  report(8, [] { return criterion8(); });

  std::printf("acceptance: %d/%d criteria passed\n", passed, ran);
  return (ran > 0 && passed == ran) ? 0 : 1;
}
