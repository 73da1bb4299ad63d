#include "aesrank/prng.hpp"

namespace aesrank {

namespace {

// Key-derivation layout: the seed in little-endian order followed by a fixed
// 8-byte tag, so distinct seeds give distinct cipher keys.
Block seed_key(std::uint64_t seed) {
  Block k{};
  for (unsigned i = 0; i < 8; ++i) k[i] = std::uint8_t(seed >> (8 * i));
  const std::uint8_t tag[8] = {'r', 'a', 'n', 'k', 'c', 't', 'r', '1'};
  for (unsigned i = 0; i < 8; ++i) k[8 + i] = tag[i];
  return k;
}

}  // namespace

CtrPrng::CtrPrng(std::uint64_t seed)
    : seed_(seed), key_(CipherKey::schedule(seed_key(seed))) {}

Block CtrPrng::block(std::uint32_t domain, std::uint64_t index) const {
  Block ctr{};
  for (unsigned i = 0; i < 8; ++i) ctr[i] = std::uint8_t(index >> (8 * i));
  for (unsigned i = 0; i < 4; ++i) ctr[8 + i] = std::uint8_t(domain >> (8 * i));
  return encrypt(key_, ctr);
}

void CtrPrng::fill(std::uint32_t domain, std::uint64_t index,
                   std::span<std::uint8_t> out) const {
  std::size_t done = 0;
  while (done < out.size()) {
    const Block b = block(domain, index++);
    const std::size_t n = std::min<std::size_t>(16, out.size() - done);
    std::copy_n(b.begin(), n, out.begin() + done);
    done += n;
  }
}

std::uint64_t CtrPrng::word(std::uint32_t domain, std::uint64_t index) const {
  const Block b = block(domain, index);
  std::uint64_t v = 0;
  for (unsigned i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

}  // namespace aesrank
