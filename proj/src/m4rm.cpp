#include <sstream>
#include <stdexcept>

#include "aesrank/pluq.hpp"
#include "gf2_kernels.hpp"

namespace aesrank {

using namespace gf2k;

// C = A * B via the method of the Four Russians: for every group of up to 8
// columns of A, a Gray-code table of XOR combinations of the matching rows
// of B is built once per strip and indexed by A's packed group bits.
BitMatrix m4rm_multiply(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "m4rm_multiply: inner dimensions differ (" << a.cols() << " vs " << b.rows()
        << ")";
    throw std::invalid_argument(msg.str());
  }
  BitMatrix c(a.rows(), b.cols());
  if (!a.rows() || !a.cols() || !b.cols()) return c;

  const auto strips = make_strips(0, b.cols());
  std::vector<std::uint64_t> table(256 * kStripWords);
  std::vector<std::uint64_t> srcbuf(8 * kStripWords);
  std::vector<std::uint8_t> sel(a.rows());

  for (std::size_t g0 = 0; g0 < a.cols(); g0 += 8) {
    const unsigned g = unsigned(std::min<std::size_t>(8, a.cols() - g0));
    std::uint8_t any = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      sel[i] = std::uint8_t(extract_bits(a.row_data(i), g0, g));
      any |= sel[i];
    }
    if (!any) continue;
    for (const Strip& s : strips) {
      const std::uint64_t* ptrs[8];
      for (unsigned t = 0; t < g; ++t) ptrs[t] = b.row_data(g0 + t) + s.w_lo;
      build_table(table.data(), s.sw, ptrs, g, s.head_mask, s.tail_mask, srcbuf.data());
      for (std::size_t i = 0; i < a.rows(); ++i)
        if (const std::uint8_t sv = sel[i])
          xor_words(c.row_data(i) + s.w_lo, table.data() + std::size_t(sv) * s.sw, s.sw);
    }
  }
  return c;
}

}  // namespace aesrank
