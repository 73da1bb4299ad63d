#pragma once

#include <cstdint>
#include <span>

#include "aesrank/aes.hpp"

namespace aesrank {

// Deterministic pseudorandom generator: AES-128 in counter mode under a key
// derived from a 64-bit seed.  Counters carry a 32-bit domain tag so that
// independent consumers (key material, sample sets, baseline vectors, ...)
// draw from disjoint, individually addressable streams.  Because each output
// block is the image of a distinct counter under a fixed permutation, blocks
// within one seed never collide -- which is exactly what the pseudorandom
// sampling in the experiment needs.
class CtrPrng {
public:
  explicit CtrPrng(std::uint64_t seed);

  // The `index`-th 16-byte block of stream `domain`.
  Block block(std::uint32_t domain, std::uint64_t index) const;

  // Fills `out` with consecutive blocks of the stream starting at block
  // `index` (out.size() need not be a multiple of 16).
  void fill(std::uint32_t domain, std::uint64_t index, std::span<std::uint8_t> out) const;

  // Convenience: a uint64 drawn from the stream.
  std::uint64_t word(std::uint32_t domain, std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

private:
  std::uint64_t seed_;
  CipherKey key_;
};

// Stream domains used by the artifact.
namespace prng_domain {
inline constexpr std::uint32_t kExperimentKeys = 1;  // cipher keys drawn per trial
inline constexpr std::uint32_t kRandomSets = 2;      // pseudorandom baseline vectors
inline constexpr std::uint32_t kSpanSampler = 3;     // generic sampling vectors
}  // namespace prng_domain

}  // namespace aesrank
