#include "aesrank/distinguisher.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace aesrank {
namespace {

void check_window_starts(std::span<const std::uint32_t> starts) {
  if (starts.empty()) {
    throw std::invalid_argument("algorithm_b: at least one window start is required");
  }
  for (std::uint32_t s : starts) {
    if (s < 1 || s > kNumWindows) {
      throw std::out_of_range("algorithm_b: window start out of range [1, 33792]");
    }
  }
}

}  // namespace

OrderedSet::OrderedSet(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.size() != kSetSize) {
    throw std::invalid_argument("OrderedSet: expected exactly 65536 blocks");
  }
}

bool OrderedSet::all_distinct() const {
  std::vector<Block> sorted = blocks_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

OrderedSet build_sbar(PairOrder order) {
  std::vector<Block> blocks(kSetSize);
  for (std::size_t i = 0; i < kSetSize; ++i) {
    Block& b = blocks[i];
    b.fill(0);
    const auto hi = static_cast<std::uint8_t>(i >> 8);
    const auto lo = static_cast<std::uint8_t>(i & 0xff);
    if (order == PairOrder::kByte15Dominant) {
      b[14] = hi;
      b[15] = lo;
    } else {
      b[14] = lo;
      b[15] = hi;
    }
  }
  return OrderedSet(std::move(blocks));
}

OrderedSet encrypt_set(const OrderedSet& s, const CipherKey& key, const RoundSpec& spec) {
  std::vector<Block> out(kSetSize);
  for (std::size_t i = 0; i < kSetSize; ++i) {
    out[i] = encrypt(key, s[i], spec);
  }
  return OrderedSet(std::move(out));
}

OrderedSet random_sample_set(const CtrPrng& prng, std::uint32_t set_index) {
  std::vector<Block> out(kSetSize);
  const std::uint64_t base = static_cast<std::uint64_t>(set_index) << 16;
  for (std::size_t i = 0; i < kSetSize; ++i) {
    out[i] = prng.block(prng_domain::kRandomSets, base | i);
  }
  return OrderedSet(std::move(out));
}

OrderedSet random_sample_set(std::uint64_t seed) {
  return random_sample_set(CtrPrng(seed), 0);
}

BitMatrix embed_set(const OrderedSet& s, const EmbeddingParams& params) {
  BitMatrix m(kSetSize, params.ambient_dim());
  for (std::size_t i = 0; i < kSetSize; ++i) {
    alpha_row(params, s[i], m.row_data(i));
  }
  return m;
}

std::uint32_t window_rank(const BitMatrix& embedded, std::uint32_t start, BitMatrix& work,
                          std::size_t block_cols) {
  if (start < 1 || start + kWindowRows - 1 > embedded.rows()) {
    throw std::out_of_range("window_rank: window exceeds the embedded matrix");
  }
  if (work.rows() != kWindowRows || work.cols() != embedded.cols()) {
    work = BitMatrix(kWindowRows, embedded.cols());
  }
  std::memcpy(work.row_data(0), embedded.row_data(start - 1),
              kWindowRows * embedded.words_per_row() * sizeof(std::uint64_t));
  return static_cast<std::uint32_t>(gf2_rank_destructive(work, block_cols));
}

std::vector<std::uint32_t> all_window_starts() {
  std::vector<std::uint32_t> starts(kNumWindows);
  for (std::size_t i = 0; i < kNumWindows; ++i) {
    starts[i] = static_cast<std::uint32_t>(i + 1);
  }
  return starts;
}

std::vector<std::uint32_t> evenly_spaced_starts(std::uint32_t count) {
  if (count < 1 || count > kNumWindows) {
    throw std::invalid_argument("evenly_spaced_starts: count must be in [1, 33792]");
  }
  if (count == 1) {
    return {1};
  }
  std::vector<std::uint32_t> starts(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    starts[i] = static_cast<std::uint32_t>(1 + i * (kNumWindows - 1) / (count - 1));
  }
  return starts;
}

RankCensus algorithm_b(const OrderedSet& s, std::span<const std::uint32_t> window_starts,
                       std::size_t block_cols, unsigned threads,
                       const std::function<void()>& per_window) {
  check_window_starts(window_starts);
  const EmbeddingParams& params = EmbeddingParams::aes();
  const BitMatrix embedded = embed_set(s, params);

  if (threads <= 1 || window_starts.size() == 1) {
    BitMatrix work(kWindowRows, embedded.cols());
    RankCensus census;
    for (std::uint32_t start : window_starts) {
      census.add(window_rank(embedded, start, work, block_cols));
      if (per_window) per_window();
    }
    return census;
  }

  const unsigned workers =
      std::min<unsigned>(threads, static_cast<unsigned>(window_starts.size()));
  std::vector<RankCensus> partial(workers);
  std::atomic<std::size_t> next{0};
  std::mutex cb_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      BitMatrix work(kWindowRows, embedded.cols());
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= window_starts.size()) break;
        partial[w].add(window_rank(embedded, window_starts[i], work, block_cols));
        if (per_window) {
          std::lock_guard<std::mutex> lock(cb_mutex);
          per_window();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();

  RankCensus census;
  for (const RankCensus& p : partial) census.merge(p);
  return census;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.tau < 1) {
    throw std::invalid_argument("run_experiment: tau must be >= 1");
  }
  const std::vector<std::uint32_t> starts =
      cfg.windows_per_set ? evenly_spaced_starts(*cfg.windows_per_set) : all_window_starts();

  const CtrPrng prng(cfg.seed);
  const OrderedSet sbar = build_sbar(cfg.pair_order);

  ExperimentResult result;
  result.window_starts = starts;
  result.aes.reserve(cfg.tau);
  result.random.reserve(cfg.tau);

  const std::size_t total = 2 * static_cast<std::size_t>(cfg.tau) * starts.size();
  std::size_t done = 0;
  const std::function<void()> tick = [&] {
    ++done;
    if (cfg.progress) cfg.progress(done, total);
  };

  for (std::uint32_t trial = 0; trial < cfg.tau; ++trial) {
    std::vector<std::uint8_t> key_bytes(cfg.key_bytes);
    prng.fill(prng_domain::kExperimentKeys, static_cast<std::uint64_t>(trial) * 4, key_bytes);
    const CipherKey key = CipherKey::schedule(key_bytes);
    const OrderedSet enc = encrypt_set(sbar, key, RoundSpec::reduced(cfg.rounds));
    result.aes.push_back(algorithm_b(enc, starts, cfg.block_cols, cfg.threads, tick));
  }
  for (std::uint32_t trial = 0; trial < cfg.tau; ++trial) {
    const OrderedSet baseline = random_sample_set(prng, trial);
    result.random.push_back(algorithm_b(baseline, starts, cfg.block_cols, cfg.threads, tick));
  }
  return result;
}

}  // namespace aesrank
