#pragma once

// Internal bit-level kernels shared by the GF(2) elimination and multiply
// routines.  Everything here works on raw row words; ranges are absolute bit
// positions within a row.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

namespace aesrank::gf2k {

inline constexpr std::size_t kStripWords = 64;  // 4096-bit strips keep a table in L2

// Extracts n <= 8 bits starting at absolute bit position `bit` of a row.
inline std::uint32_t extract_bits(const std::uint64_t* row, std::size_t bit, unsigned n) {
  const std::size_t w = bit >> 6;
  const unsigned off = unsigned(bit & 63);
  std::uint64_t v = row[w] >> off;
  if (off + n > 64) v |= row[w + 1] << (64 - off);
  return std::uint32_t(v & ((std::uint64_t{1} << n) - 1));
}

// Reads n <= 64 bits at an arbitrary bit offset.
inline std::uint64_t read_chunk(const std::uint64_t* row, std::size_t bit, unsigned n) {
  const std::size_t w = bit >> 6;
  const unsigned off = unsigned(bit & 63);
  std::uint64_t v = row[w] >> off;
  if (off && off + n > 64) v |= row[w + 1] << (64 - off);
  if (n < 64) v &= (std::uint64_t{1} << n) - 1;
  return v;
}

// Writes n <= 64 bits at an arbitrary bit offset, preserving neighbours.
inline void write_chunk(std::uint64_t* row, std::size_t bit, unsigned n, std::uint64_t v) {
  const std::size_t w = bit >> 6;
  const unsigned off = unsigned(bit & 63);
  const std::uint64_t mask = (n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  v &= mask;
  row[w] = (row[w] & ~(mask << off)) | (v << off);
  if (off && off + n > 64) {
    const std::uint64_t hi_mask = (std::uint64_t{1} << (off + n - 64)) - 1;
    row[w + 1] = (row[w + 1] & ~hi_mask) | (v >> (64 - off));
  }
}

// dst ^= src over the absolute bit range [from, to).
inline void xor_range(std::uint64_t* dst, const std::uint64_t* src, std::size_t from,
                      std::size_t to) {
  if (from >= to) return;
  const std::size_t w0 = from >> 6, w1 = (to - 1) >> 6;
  const std::uint64_t head = ~std::uint64_t{0} << (from & 63);
  const std::uint64_t tail =
      (to & 63) ? ((std::uint64_t{1} << (to & 63)) - 1) : ~std::uint64_t{0};
  if (w0 == w1) {
    dst[w0] ^= src[w0] & head & tail;
    return;
  }
  dst[w0] ^= src[w0] & head;
  for (std::size_t w = w0 + 1; w < w1; ++w) dst[w] ^= src[w];
  dst[w1] ^= src[w1] & tail;
}

inline void zero_range(std::uint64_t* row, std::size_t from, std::size_t to) {
  if (from >= to) return;
  const std::size_t w0 = from >> 6, w1 = (to - 1) >> 6;
  const std::uint64_t head = ~std::uint64_t{0} << (from & 63);
  const std::uint64_t tail =
      (to & 63) ? ((std::uint64_t{1} << (to & 63)) - 1) : ~std::uint64_t{0};
  if (w0 == w1) {
    row[w0] &= ~(head & tail);
    return;
  }
  row[w0] &= ~head;
  if (w1 > w0 + 1) std::memset(row + w0 + 1, 0, (w1 - w0 - 1) * sizeof(std::uint64_t));
  row[w1] &= ~tail;
}

inline void read_bits_to(std::uint64_t* buf, const std::uint64_t* row, std::size_t bit,
                         std::size_t n) {
  std::size_t done = 0, w = 0;
  while (done < n) {
    const unsigned chunk = unsigned(std::min<std::size_t>(64, n - done));
    buf[w++] = read_chunk(row, bit + done, chunk);
    done += chunk;
  }
}

inline void write_bits_from(std::uint64_t* row, std::size_t bit, const std::uint64_t* buf,
                            std::size_t n) {
  std::size_t done = 0, w = 0;
  while (done < n) {
    const unsigned chunk = unsigned(std::min<std::size_t>(64, n - done));
    write_chunk(row, bit + done, chunk, buf[w++]);
    done += chunk;
  }
}

template <std::size_t N>
inline void xor_fixed(std::uint64_t* __restrict dst, const std::uint64_t* __restrict src) {
  for (std::size_t w = 0; w < N; ++w) dst[w] ^= src[w];
}

inline void xor_words(std::uint64_t* __restrict dst, const std::uint64_t* __restrict src,
                      std::size_t n) {
  for (std::size_t w = 0; w < n; ++w) dst[w] ^= src[w];
}

// A word-aligned slice of a column range, with masks confining edge words to
// the range.  Tables built from masked strips are zero outside the range, so
// applying them word-wise cannot leak across region boundaries.
struct Strip {
  std::size_t w_lo;
  std::size_t sw;
  std::uint64_t head_mask;
  std::uint64_t tail_mask;
};

inline std::vector<Strip> make_strips(std::size_t cfrom, std::size_t cto) {
  std::vector<Strip> strips;
  if (cfrom >= cto) return strips;
  const std::size_t w0 = cfrom >> 6;
  const std::size_t w_end = (cto + 63) >> 6;
  for (std::size_t w = w0; w < w_end; w += kStripWords) {
    Strip s;
    s.w_lo = w;
    s.sw = std::min(kStripWords, w_end - w);
    s.head_mask = (w == w0 && (cfrom & 63)) ? (~std::uint64_t{0} << (cfrom & 63))
                                            : ~std::uint64_t{0};
    const bool last = (w + s.sw == w_end);
    s.tail_mask = (last && (cto & 63)) ? ((std::uint64_t{1} << (cto & 63)) - 1)
                                       : ~std::uint64_t{0};
    strips.push_back(s);
  }
  return strips;
}

// Gray-code XOR table over up to 8 masked source strips.
inline void build_table(std::uint64_t* tbl, std::size_t sw, const std::uint64_t* const* srcs,
                        unsigned g, std::uint64_t head_mask, std::uint64_t tail_mask,
                        std::uint64_t* srcbuf) {
  for (unsigned j = 0; j < g; ++j) {
    std::uint64_t* d = srcbuf + j * sw;
    std::memcpy(d, srcs[j], sw * sizeof(std::uint64_t));
    d[0] &= head_mask;
    d[sw - 1] &= tail_mask;
  }
  std::memset(tbl, 0, sw * sizeof(std::uint64_t));
  const unsigned size = 1u << g;
  for (unsigned i = 1; i < size; ++i) {
    const unsigned gi = i ^ (i >> 1);
    const unsigned gp = (i - 1) ^ ((i - 1) >> 1);
    const std::uint64_t* s = srcbuf + std::size_t(std::countr_zero(i)) * sw;
    const std::uint64_t* p = tbl + std::size_t(gp) * sw;
    std::uint64_t* d = tbl + std::size_t(gi) * sw;
    for (std::size_t w = 0; w < sw; ++w) d[w] = p[w] ^ s[w];
  }
}

}  // namespace aesrank::gf2k
