#include "aesrank/selftest.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "aesrank/aes.hpp"
#include "aesrank/distinguisher.hpp"
#include "aesrank/embedding.hpp"
#include "aesrank/pluq.hpp"
#include "aesrank/prng.hpp"
#include "aesrank/stats.hpp"

namespace aesrank {
namespace {

struct KnownAnswer {
  const char* key;
  const char* plain;
  const char* cipher;
};

// FIPS-197 appendix B and appendix C example vectors.
constexpr KnownAnswer kVectors[] = {
    {"2b7e151628aed2a6abf7158809cf4f3c", "3243f6a8885a308d313198a2e0370734",
     "3925841d02dc09fbdc118597196a0b32"},
    {"000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff",
     "69c4e0d86a7b0430d8cdb78070b4c55a"},
    {"000102030405060708090a0b0c0d0e0f1011121314151617", "00112233445566778899aabbccddeeff",
     "dda97ca4864cdfe06eaf70a0ec0d7191"},
    {"000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
     "00112233445566778899aabbccddeeff", "8ea2b7ca516745bfeafc49904b496089"},
};

SelfTestItem check_known_answers() {
  SelfTestItem item{"cipher-known-answers", true, ""};
  std::ostringstream detail;
  for (const KnownAnswer& v : kVectors) {
    const CipherKey key = CipherKey::schedule(bytes_from_hex(v.key));
    const Block out = encrypt(key, block_from_hex(v.plain));
    const std::string got = to_hex(out);
    if (got != v.cipher) {
      item.pass = false;
      detail << "key " << v.key << ": got " << got << ", want " << v.cipher << "; ";
    }
  }
  item.detail = item.pass ? "4 vectors (128/192/256-bit keys) match" : detail.str();
  return item;
}

SelfTestItem check_sbox_bijective(bool corrupt) {
  SelfTestItem item{"sbox-bijective", true, ""};
  std::array<std::uint8_t, 256> table{};
  for (unsigned i = 0; i < 256; ++i) table[i] = sbox(static_cast<std::uint8_t>(i));
  if (corrupt) table[37] ^= 0x01;  // the injected fault the harness must catch

  std::array<bool, 256> seen{};
  for (unsigned i = 0; i < 256; ++i) {
    if (seen[table[i]]) {
      item.pass = false;
      std::ostringstream detail;
      detail << "value 0x" << std::hex << unsigned(table[i]) << " produced twice";
      item.detail = detail.str();
      return item;
    }
    seen[table[i]] = true;
  }
  item.detail = "S-box is a permutation of 256 values";
  return item;
}

SelfTestItem check_mixing_order() {
  SelfTestItem item{"mixing-order-8", true, ""};
  const BitMatrix m = lambda_matrix();
  const BitMatrix id = BitMatrix::identity(m.rows());
  BitMatrix power = id;
  unsigned order = 0;
  for (unsigned j = 1; j <= 16; ++j) {
    power = m4rm_multiply(power, m);
    if (power == id) {
      order = j;
      break;
    }
  }
  item.pass = (order == 8);
  std::ostringstream detail;
  detail << "multiplicative order of the mixing matrix = " << order << " (want 8)";
  item.detail = detail.str();
  return item;
}

// Independent rank oracle: plain Gaussian elimination on single-word rows.
std::size_t naive_rank_words(std::vector<std::uint64_t> rows) {
  std::size_t rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const std::uint64_t mask = std::uint64_t{1} << bit;
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && (rows[i] & mask)) rows[i] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

SelfTestItem check_rank_oracle() {
  SelfTestItem item{"rank-vs-naive", true, ""};
  const CtrPrng prng(0xdec0de5eedull);
  std::uint64_t draw = 0;
  unsigned checked = 0;
  for (unsigned trial = 0; trial < 100 && item.pass; ++trial) {
    const std::size_t nrows = 1 + prng.word(prng_domain::kSpanSampler, draw++) % 48;
    const std::size_t ncols = 1 + prng.word(prng_domain::kSpanSampler, draw++) % 48;
    BitMatrix m(nrows, ncols);
    std::vector<std::uint64_t> rows(nrows);
    const std::uint64_t col_mask =
        ncols == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << ncols) - 1);
    for (std::size_t r = 0; r < nrows; ++r) {
      rows[r] = prng.word(prng_domain::kSpanSampler, draw++) & col_mask;
      m.row_data(r)[0] = rows[r];
    }
    const std::size_t got = gf2_rank(m);
    const std::size_t want = naive_rank_words(rows);
    if (got != want) {
      item.pass = false;
      std::ostringstream detail;
      detail << "trial " << trial << " (" << nrows << "x" << ncols << "): rank " << got
             << " != naive " << want;
      item.detail = detail.str();
    }
    ++checked;
  }
  if (item.pass) {
    std::ostringstream detail;
    detail << checked << " random matrices match the naive eliminator";
    item.detail = detail.str();
  }
  return item;
}

SelfTestItem check_one_hot() {
  SelfTestItem item{"one-hot-embedding", true, ""};
  const GfField field(8, 0x11b, 0x03);
  std::array<bool, 256> seen{};
  for (unsigned x = 0; x < 256 && item.pass; ++x) {
    const std::vector<std::uint8_t> eps = epsilon_prime(field, static_cast<std::uint8_t>(x));
    unsigned weight = 0;
    unsigned index = 0;
    for (unsigned i = 0; i < eps.size(); ++i) {
      if (eps[i]) {
        ++weight;
        index = i;
      }
    }
    const bool hot_ok = weight == 1 && !seen[index] &&
                        (x == 0 ? index == 0
                                : index == field.log_eta(static_cast<std::uint8_t>(x)) + 1);
    if (!hot_ok) {
      item.pass = false;
      std::ostringstream detail;
      detail << "element 0x" << std::hex << x << " embeds with weight " << std::dec << weight
             << " at index " << index;
      item.detail = detail.str();
    }
    seen[index] = true;
  }
  if (item.pass) item.detail = "all 256 elements map one-hot onto distinct coordinates";
  return item;
}

// Exact count of n x n GF(2) matrices of each rank, by the row-at-a-time
// recurrence: appending a row inside the current span keeps the rank
// (2^r choices), outside it increments the rank (2^n - 2^r choices).
std::vector<unsigned __int128> exact_rank_counts(unsigned n) {
  std::vector<unsigned __int128> counts(n + 1, 0);
  counts[0] = 1;
  for (unsigned row = 0; row < n; ++row) {
    std::vector<unsigned __int128> next(n + 1, 0);
    for (unsigned r = 0; r <= row; ++r) {
      if (counts[r] == 0) continue;
      next[r] += counts[r] << r;
      next[r + 1] += counts[r] * (((unsigned __int128)1 << n) - ((unsigned __int128)1 << r));
    }
    counts = next;
  }
  return counts;
}

SelfTestItem check_theory_enumeration() {
  SelfTestItem item{"rank-distribution-exact", true, ""};
  for (unsigned n = 1; n <= 6 && item.pass; ++n) {
    const std::vector<unsigned __int128> counts = exact_rank_counts(n);
    const RankDistribution dist = square_rank_distribution(n);
    const long double total = powl(2.0L, static_cast<long double>(n) * n);
    for (unsigned r = 0; r <= n; ++r) {
      const long double exact = static_cast<long double>(counts[r]) / total;
      const double got = dist.full[r];
      if (std::fabs(got - static_cast<double>(exact)) > 1e-12) {
        item.pass = false;
        std::ostringstream detail;
        detail << "n=" << n << " r=" << r << ": " << got << " vs exact "
               << static_cast<double>(exact);
        item.detail = detail.str();
      }
    }
  }
  if (item.pass) item.detail = "closed form matches exact counts for n <= 6";
  return item;
}

SelfTestItem check_window_spot() {
  SelfTestItem item{"chosen-set-window-rank", true, ""};
  const OrderedSet sbar = build_sbar();
  const std::uint32_t starts[] = {1};
  const RankCensus census = algorithm_b(sbar, starts);
  const auto it = census.counts.find(4690);
  item.pass = (census.total() == 1 && it != census.counts.end() && it->second == 1);
  std::ostringstream detail;
  detail << "first window of the chosen-plaintext set has rank ";
  if (census.counts.size() == 1) {
    detail << census.counts.begin()->first << " (want 4690)";
  } else {
    detail << "<multiple>";
  }
  item.detail = detail.str();
  return item;
}

}  // namespace

SelfTestResult run_selftest(const SelfTestOptions& options) {
  SelfTestResult result;
  result.items.push_back(check_known_answers());
  result.items.push_back(check_sbox_bijective(options.corrupt_sbox));
  result.items.push_back(check_mixing_order());
  result.items.push_back(check_rank_oracle());
  result.items.push_back(check_one_hot());
  result.items.push_back(check_theory_enumeration());
  if (options.spot_check) {
    result.items.push_back(check_window_spot());
  }
  return result;
}

}  // namespace aesrank
