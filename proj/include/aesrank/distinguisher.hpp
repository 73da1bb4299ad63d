#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aesrank/aes.hpp"
#include "aesrank/census.hpp"
#include "aesrank/embedding.hpp"
#include "aesrank/pluq.hpp"
#include "aesrank/prng.hpp"

namespace aesrank {

inline constexpr std::size_t kSetSize = 65536;      // |S| = 2^16 blocks
inline constexpr std::size_t kWindowRows = 31745;   // rows per census matrix
inline constexpr std::size_t kAmbientDim = 32768;   // 2^8 * 16 * 8
inline constexpr std::size_t kNumWindows = kSetSize - kWindowRows + 1;  // 33792

// Which of the two free plaintext bytes is the lexicographically dominant
// coordinate of the ordered pair (bytes are numbered 1..16 here, i.e. FIPS
// input order).  kByte15Dominant is the primary convention; the swapped one
// is retained as an explicitly selectable fallback.
enum class PairOrder { kByte15Dominant, kByte16Dominant };

// An ordered set of exactly 2^16 blocks.
class OrderedSet {
public:
  explicit OrderedSet(std::vector<Block> blocks);

  const Block& operator[](std::size_t i) const { return blocks_[i]; }
  std::span<const Block> blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

  bool all_distinct() const;

private:
  std::vector<Block> blocks_;
};

// The chosen-plaintext set: bytes 1..14 zero, the pair (byte 15, byte 16)
// running through all of (F_256)^2 in ascending lexicographic order.
OrderedSet build_sbar(PairOrder order = PairOrder::kByte15Dominant);

// Element-wise encryption, preserving order (and hence distinctness).
OrderedSet encrypt_set(const OrderedSet& s, const CipherKey& key, const RoundSpec& spec);

// 2^16 distinct pseudorandom blocks: images of distinct counters under the
// seed-keyed permutation, so distinctness is structural.
OrderedSet random_sample_set(const CtrPrng& prng, std::uint32_t set_index);
OrderedSet random_sample_set(std::uint64_t seed);

// Rows i of the result are alpha(s[i]): the whole set pushed through the
// embedding (65536 x 32768 for the cipher instance).
BitMatrix embed_set(const OrderedSet& s, const EmbeddingParams& params);

// Rank of the window of kWindowRows consecutive embedded rows starting at
// the 1-based index `start`.  `work` is resized as needed and clobbered.
std::uint32_t window_rank(const BitMatrix& embedded, std::uint32_t start, BitMatrix& work,
                          std::size_t block_cols = kDefaultBlockCols);

std::vector<std::uint32_t> all_window_starts();

// `count` starts spread evenly over [1, kNumWindows], endpoints included.
std::vector<std::uint32_t> evenly_spaced_starts(std::uint32_t count);

// Algorithm B: the sliding-window rank census of an ordered set.
// window_starts are 1-based and must lie in [1, kNumWindows]; the census
// total equals the number of requested windows.  `threads` > 1 distributes
// windows across worker threads (the result does not depend on it).
RankCensus algorithm_b(const OrderedSet& s, std::span<const std::uint32_t> window_starts,
                       std::size_t block_cols = kDefaultBlockCols, unsigned threads = 1,
                       const std::function<void()>& per_window = {});

struct ExperimentConfig {
  std::uint32_t tau = 2;          // keys per arm; must be >= 1
  unsigned rounds = 10;           // rounds after whitening for the AES arm
  std::size_t key_bytes = 16;     // 16, 24 or 32
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> windows_per_set;  // nullopt = all 33792
  PairOrder pair_order = PairOrder::kByte15Dominant;
  std::size_t block_cols = kDefaultBlockCols;
  unsigned threads = 1;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct ExperimentResult {
  std::vector<std::uint32_t> window_starts;  // shared by every census
  std::vector<RankCensus> aes;               // one per key
  std::vector<RankCensus> random;            // one per baseline set
};

// The random-key-sample experiment: tau censuses of encrypted sets under
// independently drawn keys against tau censuses of pseudorandom baselines.
// Fully deterministic in cfg.seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace aesrank
