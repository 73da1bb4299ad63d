#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aesrank/bitmatrix.hpp"

namespace aesrank {

// A 16-byte cipher block.  Byte i holds state entry (row i mod 4,
// column i div 4), i.e. blocks are the column-major flattening of the
// standard 4x4 state.
using Block = std::array<std::uint8_t, 16>;

// Expanded key for AES-128/192/256.
class CipherKey {
public:
  // Accepts 16, 24 or 32 key bytes; anything else throws std::invalid_argument.
  static CipherKey schedule(std::span<const std::uint8_t> key_bytes);

  // Number of rounds N for this key size: 10, 12 or 14.
  unsigned rounds() const noexcept { return rounds_; }
  std::size_t key_bytes() const noexcept { return key_len_; }

  // Round keys k^(0) .. k^(N); k^(0) is the whitening key.
  const Block& round_key(unsigned i) const;

private:
  CipherKey() = default;
  std::vector<Block> round_keys_;
  unsigned rounds_ = 0;
  std::size_t key_len_ = 0;
};

// How many rounds to apply after the initial key whitening, and whether the
// final applied round is the atypical one (ShiftRows without MixColumns).
struct RoundSpec {
  unsigned rounds;
  bool final_round_atypical;

  // The full cipher: N rounds, last one atypical.
  static RoundSpec full(const CipherKey& key) { return {key.rounds(), true}; }

  // r-round reduced cipher: whitening plus r rounds of which the last is the
  // atypical one, exactly as an r-round variant of the cipher would be built.
  // r = N reproduces the full cipher; with r = 0 the flag is irrelevant.
  static RoundSpec reduced(unsigned r) { return {r, true}; }
};

// Encrypts one block.  spec.rounds must not exceed key.rounds().
Block encrypt(const CipherKey& key, const Block& in, const RoundSpec& spec);

// Full-round convenience overload.
Block encrypt(const CipherKey& key, const Block& in);

// The three maps whose composition is one typical round.
Block gamma(const Block& v);                    // parallel S-box layer
Block lambda(const Block& v);                   // MixColumns of ShiftRows
Block lambda_bar(const Block& v);               // ShiftRows only (atypical round)
Block sigma(const Block& v, const Block& key);  // key translation v + k

// Snapshot of one typical round applied to `v`: the state after each of the
// three component maps, in application order gamma, lambda, sigma.
struct RoundComponents {
  Block after_gamma;
  Block after_lambda;
  Block after_sigma;
};
RoundComponents round_components(const Block& v, const Block& round_key);

std::uint8_t sbox(std::uint8_t x);

// The mixing layer as a 128x128 matrix over GF(2): column j is the bit
// pattern of lambda applied to the block with only bit j set (bit j of a
// block is bit j mod 8 of byte j div 8).  Satisfies lambda_matrix()^8 = I.
BitMatrix lambda_matrix();

// Lowercase hex helpers; parsing rejects odd lengths and non-hex characters.
std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> bytes_from_hex(std::string_view hex);
Block block_from_hex(std::string_view hex);

}  // namespace aesrank
