#include "aesrank/pluq.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

#include "gf2_kernels.hpp"

// Blocked PLE elimination over GF(2).
//
// The matrix is factored recursively by column range.  A node covering
// columns [c0, c1) with pivot-eligible rows [r0, nrows):
//
//   1. eliminates the left half [c0, cm), producing rl pivots whose
//      multipliers are stored compactly in columns [c0, c0+rl) ("L block":
//      row i of the node holds, at column c0+t, its coefficient against the
//      t-th pivot; the diagonal and everything right of it are kept zero);
//   2. forward-substitutes those pivots through the pivot rows' right halves
//      (recursive TRSM) and eliminates the remaining rows' right halves
//      (table-driven GEMM) -- the Schur complement update;
//   3. recurses into [cm, c1) below the left pivots;
//   4. stitches the right child's L block next to the left one so the parent
//      sees a single compact L of width rl+rr.
//
// Leaves run a Four-Russians elimination over byte windows that never cross
// a word boundary.  The panel is first copied into a dense side buffer whose
// row stride is the panel width, so the column probes of the pivot hunt walk
// a few megabytes instead of striding across full matrix rows; the compact L
// block and the panel's residue are written back when the panel closes.  Row
// swaps are index indirection only; the backing rows never move, which also
// makes the final row permutation trivial to read off.  U is not retained:
// the artifact only ever consumes ranks, permutations and pivot positions.
//
// The Schur update applies groups of eight pivots via Gray-code tables, four
// tables per destination pass, so every 4096-bit strip of a target row is
// loaded and stored once per 32 pivots.

namespace aesrank {
namespace {

using namespace gf2k;

constexpr std::size_t kRowBlock = 2048;     // GEMM tile height
constexpr std::size_t kTrsmLeaf = 64;       // direct forward-substitution size
constexpr std::size_t kGroupBundle = 4;     // pivot-octet tables per GEMM pass
constexpr std::size_t kTableWords = 256 * kStripWords;

// dst ^= t[0] ^ ... ^ t[K-1], n words.
template <unsigned K>
inline void xor_tables(std::uint64_t* __restrict dst, const std::uint64_t* const* t,
                       std::size_t n) {
  for (std::size_t w = 0; w < n; ++w) {
    std::uint64_t acc = t[0][w];
    if constexpr (K > 1) acc ^= t[1][w];
    if constexpr (K > 2) acc ^= t[2][w];
    if constexpr (K > 3) acc ^= t[3][w];
    dst[w] ^= acc;
  }
}

class Eliminator {
public:
  Eliminator(BitMatrix& a, std::size_t block_cols)
      : nrows_(a.rows()),
        ncols_(a.cols()),
        stride_(a.words_per_row()),
        data_(nrows_ ? a.row_data(0) : nullptr),
        block_(std::max<std::size_t>(block_cols, 1)),
        rowidx_(nrows_),
        table_(kGroupBundle * kTableWords),
        srcbuf_(8 * kStripWords) {
    std::iota(rowidx_.begin(), rowidx_.end(), std::uint32_t{0});
  }

  std::size_t run() {
    if (!nrows_ || !ncols_) return 0;
    pivot_cols_.reserve(std::min(nrows_, ncols_));
    return eliminate(0, 0, ncols_);
  }

  const std::vector<std::uint32_t>& row_order() const { return rowidx_; }
  const std::vector<std::uint32_t>& pivot_columns() const { return pivot_cols_; }

private:
  std::uint64_t* row(std::size_t i) { return data_ + std::size_t(rowidx_[i]) * stride_; }

  // First local index in [from, nr) whose byte-column entry has `bit` set,
  // or nr.  Eight bytes are tested per step so zero columns scan fast.
  std::size_t find_pivot(std::size_t from, std::size_t nr, std::uint8_t bit) const {
    const std::uint8_t* bc = bcol_.data();
    const std::uint64_t lanes = 0x0101010101010101ull * bit;
    std::size_t i = from;
    while (i + 8 <= nr) {
      std::uint64_t v;
      std::memcpy(&v, bc + i, 8);
      if (v & lanes) break;
      i += 8;
    }
    for (; i < nr; ++i)
      if (bc[i] & bit) return i;
    return nr;
  }

  std::size_t eliminate(std::size_t r0, std::size_t c0, std::size_t c1) {
    if (r0 >= nrows_) return 0;
    const std::size_t width = c1 - c0;
    if (width <= block_) return base_case(r0, c0, c1);
    std::size_t half = width / 2;
    if (width > 128) half = ((half + 63) / 64) * 64;  // keep panel edges word-aligned
    const std::size_t cm = c0 + half;
    const std::size_t rl = eliminate(r0, c0, cm);
    if (rl) {
      trsm(r0, 0, rl, c0, cm, c1);
      if (r0 + rl < nrows_) gemm(r0, 0, rl, c0, r0 + rl, nrows_, cm, c1);
    }
    const std::size_t rr = eliminate(r0 + rl, cm, c1);
    combine_l(r0, rl, rr, c0, cm);
    return rl + rr;
  }

  // Four-Russians PLE over a panel of at most block_ columns, run inside a
  // dense copy of the panel.
  //
  // Pivots are hunted one column at a time inside byte windows.  While a
  // window is live its bits are held in an extracted byte column, so the
  // pivot scans and eliminations are branch-free byte passes; each row's
  // coefficients against the window's pivots accumulate alongside, and once
  // the window closes the rest of the panel is updated in one Gray-table
  // pass per strip.  At the end the multiplier buffer is written back as the
  // panel's compact L block and the panel columns beyond it are zeroed (the
  // eliminated rows are zero there by construction; the pivot rows' panel
  // residue is dead weight once the pivot columns are recorded).
  std::size_t base_case(std::size_t r0, std::size_t c0, std::size_t c1) {
    const std::size_t nr = nrows_ - r0;
    const std::size_t width = c1 - c0;
    if (!nr || !width) return 0;
    const std::size_t cap = std::min(nr, width);
    const std::size_t mw = (cap + 63) >> 6;
    const std::size_t pw = (width + 63) >> 6;
    mult_.assign(nr * mw, 0);
    panel_.resize(nr * pw);
    for (std::size_t j = 0; j < nr; ++j)
      read_bits_to(panel_.data() + j * pw, row(r0 + j), c0, width);
    const auto prow = [&](std::size_t i) { return panel_.data() + (i - r0) * pw; };
    bcol_.resize(nr);
    selb_.resize(nr);

    std::size_t r = 0;
    std::size_t c = 0;
    const std::uint64_t* ptrs[8];
    while (c < width && r < cap) {
      const unsigned k = unsigned(std::min<std::size_t>({8, width - c, 64 - (c & 63)}));
      const std::size_t wpos = c >> 6;
      const unsigned shift = unsigned(c & 63);
      const std::uint8_t kmask = std::uint8_t((1u << k) - 1);
      const std::size_t lo = r0 + r;
      for (std::size_t i = lo; i < nrows_; ++i) {
        bcol_[i - r0] = std::uint8_t((prow(i)[wpos] >> shift) & kmask);
        selb_[i - r0] = 0;
      }
      unsigned found = 0;
      for (unsigned j = 0; j < k; ++j) {
        const std::size_t dst = lo + found;
        if (dst >= nrows_) break;
        const std::uint8_t bit = std::uint8_t(1u << j);
        const std::size_t p = find_pivot(dst - r0, nr, bit);
        if (p == nr) continue;
        if (p + r0 != dst) {
          std::swap(rowidx_[p + r0], rowidx_[dst]);
          std::swap_ranges(mult_.begin() + p * mw, mult_.begin() + (p + 1) * mw,
                           mult_.begin() + (dst - r0) * mw);
          std::swap_ranges(prow(p + r0), prow(p + r0) + pw, prow(dst));
          std::swap(bcol_[p], bcol_[dst - r0]);
          std::swap(selb_[p], selb_[dst - r0]);
        }
        pivot_cols_.push_back(std::uint32_t(c0 + c + j));
        const std::uint8_t pv = bcol_[dst - r0];
        const std::uint8_t sbit = std::uint8_t(1u << found);
        std::uint8_t* bc = bcol_.data();
        std::uint8_t* sb = selb_.data();
        for (std::size_t li = dst - r0 + 1; li < nr; ++li) {
          const std::uint8_t m = std::uint8_t(-((bc[li] >> j) & 1));
          bc[li] ^= m & pv;
          sb[li] |= m & sbit;
        }
        ++found;
      }
      if (found) {
        const std::size_t R = r0 + r;
        // put the settled window bits back and record the multipliers
        const std::uint64_t wmask = std::uint64_t(kmask) << shift;
        const std::size_t mword = r >> 6;
        const unsigned moff = unsigned(r & 63);
        for (std::size_t i = lo; i < nrows_; ++i) {
          const std::size_t li = i - r0;
          std::uint64_t* pi = prow(i);
          pi[wpos] = (pi[wpos] & ~wmask) | (std::uint64_t(bcol_[li]) << shift);
          const std::uint64_t sv = selb_[li];
          mult_[li * mw + mword] |= sv << moff;
          if (moff + 8 > 64 && mword + 1 < mw)
            mult_[li * mw + mword + 1] |= sv >> (64 - moff);
        }
        // settle the pivot rows' strips beyond the window word (ascending,
        // so each row only consumes already-settled earlier pivots)
        for (unsigned u = 1; u < found; ++u) {
          std::uint64_t* ru = prow(R + u);
          const std::uint8_t su = selb_[R + u - r0];
          for (unsigned t = 0; t < u; ++t)
            if ((su >> t) & 1) xor_range(ru, prow(R + t), c + k, width);
        }
        // deferred panel-remainder update of every row below the window
        if (c + k < width && R + found < nrows_) {
          for (const Strip& s : make_strips(c + k, width)) {
            for (unsigned t = 0; t < found; ++t) ptrs[t] = prow(R + t) + s.w_lo;
            build_table(table_.data(), s.sw, ptrs, found, s.head_mask, s.tail_mask,
                        srcbuf_.data());
            for (std::size_t i = R + found; i < nrows_; ++i) {
              const std::uint32_t sel = selb_[i - r0];
              if (sel)
                xor_words(prow(i) + s.w_lo, table_.data() + std::size_t(sel) * s.sw,
                          s.sw);
            }
          }
        }
        r += found;
      }
      c += k;
    }
    // write back the compact L block into columns [c0, c0+r); everything the
    // panel held beyond a row's L width is either already zero (eliminated
    // rows) or no longer consumed (pivot residue), so it reads as zero
    for (std::size_t u = 0; u < r; ++u) {
      std::uint64_t* ru = row(r0 + u);
      write_bits_from(ru, c0, &mult_[u * mw], u);
      zero_range(ru, c0 + u, c1);
    }
    for (std::size_t i = r0 + r; i < nrows_; ++i) {
      std::uint64_t* ri = row(i);
      write_bits_from(ri, c0, &mult_[(i - r0) * mw], r);
      zero_range(ri, c0 + r, c1);
    }
    return r;
  }

  // Forward-substitutes the unit-lower triangle held in columns
  // [lc+p0, lc+p1) through the pivot rows' [cfrom, cto) strips.
  void trsm(std::size_t pr0, std::size_t p0, std::size_t p1, std::size_t lc,
            std::size_t cfrom, std::size_t cto) {
    const std::size_t n = p1 - p0;
    if (!n || cfrom >= cto) return;
    if (n <= kTrsmLeaf) {
      for (std::size_t u = p0 + 1; u < p1; ++u) {
        std::uint64_t* ru = row(pr0 + u);
        for (std::size_t g0 = p0; g0 < u; g0 += 8) {
          const unsigned g = unsigned(std::min<std::size_t>(8, u - g0));
          std::uint32_t sel = extract_bits(ru, lc + g0, g);
          while (sel) {
            const unsigned j = unsigned(std::countr_zero(sel));
            sel &= sel - 1;
            xor_range(ru, row(pr0 + g0 + j), cfrom, cto);
          }
        }
      }
      return;
    }
    const std::size_t mid = p0 + n / 2;
    trsm(pr0, p0, mid, lc, cfrom, cto);
    gemm(pr0, p0, mid, lc, pr0 + mid, pr0 + p1, cfrom, cto);
    trsm(pr0, mid, p1, lc, cfrom, cto);
  }

  // Target rows [tr0, tr1) ^= (their selector bits against pivots [p0, p1))
  // * (solved pivot rows), over columns [cfrom, cto).  Row-blocked so a tile
  // of targets stays cache-resident while the group tables stream past it;
  // within a strip up to kGroupBundle octet tables are combined into a
  // single read-xor-write pass over the tile.
  void gemm(std::size_t pr0, std::size_t p0, std::size_t p1, std::size_t lc,
            std::size_t tr0, std::size_t tr1, std::size_t cfrom, std::size_t cto) {
    if (p0 >= p1 || tr0 >= tr1 || cfrom >= cto) return;
    const std::size_t np = p1 - p0;
    const std::size_t ngroups = (np + 7) / 8;
    const auto strips = make_strips(cfrom, cto);
    for (std::size_t rb = tr0; rb < tr1; rb += kRowBlock) {
      const std::size_t rbe = std::min(tr1, rb + kRowBlock);
      const std::size_t bn = rbe - rb;
      selcache_.resize(bn * ngroups);  // row-major: one row's selectors are contiguous
      selany_.assign(ngroups, 0);
      for (std::size_t i = rb; i < rbe; ++i) {
        const std::uint64_t* ri = row(i);
        std::uint8_t* srow = selcache_.data() + (i - rb) * ngroups;
        for (std::size_t g0 = 0; g0 < ngroups; g0 += kGroupBundle) {
          const unsigned nb = unsigned(std::min<std::size_t>(8 * kGroupBundle, np - g0 * 8));
          const std::uint64_t v = read_chunk(ri, lc + p0 + g0 * 8, nb);
          const std::size_t gb = std::min(kGroupBundle, ngroups - g0);
          for (std::size_t t = 0; t < gb; ++t) {
            const std::uint8_t s = std::uint8_t(v >> (8 * t));
            srow[g0 + t] = s;
            selany_[g0 + t] |= s;
          }
        }
      }
      for (const Strip& s : strips) {
        for (std::size_t g0 = 0; g0 < ngroups; g0 += kGroupBundle) {
          const std::size_t gb = std::min(kGroupBundle, ngroups - g0);
          const std::uint8_t* sel[kGroupBundle];
          const std::uint64_t* tbl[kGroupBundle];
          unsigned na = 0;
          for (std::size_t t = 0; t < gb; ++t) {
            const std::size_t g = g0 + t;
            if (!selany_[g]) continue;
            const unsigned gn = unsigned(std::min<std::size_t>(8, np - g * 8));
            const std::uint64_t* ptrs[8];
            for (unsigned u = 0; u < gn; ++u)
              ptrs[u] = row(pr0 + p0 + g * 8 + u) + s.w_lo;
            std::uint64_t* target = table_.data() + na * kTableWords;
            build_table(target, s.sw, ptrs, gn, s.head_mask, s.tail_mask, srcbuf_.data());
            sel[na] = selcache_.data() + g;
            tbl[na] = target;
            ++na;
          }
          switch (na) {
            case 0: break;
            case 1: sweep<1>(s, rb, bn, ngroups, sel, tbl); break;
            case 2: sweep<2>(s, rb, bn, ngroups, sel, tbl); break;
            case 3: sweep<3>(s, rb, bn, ngroups, sel, tbl); break;
            default: sweep<4>(s, rb, bn, ngroups, sel, tbl); break;
          }
        }
      }
    }
  }

  // One pass over the row tile, applying K octet tables at once.  A zero
  // selector indexes the table's zero entry, so only all-zero rows branch.
  template <unsigned K>
  void sweep(const Strip& s, std::size_t rb, std::size_t bn, std::size_t sstride,
             const std::uint8_t* const* sel, const std::uint64_t* const* tbl) {
    const std::size_t sw = s.sw;
    for (std::size_t i = 0; i < bn; ++i) {
      const std::uint64_t* t[K];
      unsigned nz = 0;
      for (unsigned u = 0; u < K; ++u) {
        const std::uint8_t sv = sel[u][i * sstride];
        nz |= sv;
        t[u] = tbl[u] + std::size_t(sv) * sw;
      }
      if (!nz) continue;
      std::uint64_t* d = row(rb + i) + s.w_lo;
      if (sw == kStripWords)
        xor_tables<K>(d, t, kStripWords);
      else
        xor_tables<K>(d, t, sw);
    }
  }

  // Stitches the right child's compact L (columns [cm, cm+rr)) next to the
  // left one so the parent sees a single L block of width rl+rr at c0.
  void combine_l(std::size_t r0, std::size_t rl, std::size_t rr, std::size_t c0,
                 std::size_t cm) {
    if (!rr) return;
    movebuf_.resize((rr + 63) >> 6);
    for (std::size_t i = r0 + rl; i < nrows_; ++i) {
      std::uint64_t* ri = row(i);
      read_bits_to(movebuf_.data(), ri, cm, rr);
      write_bits_from(ri, c0 + rl, movebuf_.data(), rr);
      zero_range(ri, std::max(cm, c0 + rl + rr), cm + rr);
    }
    // left pivot rows must read as zero across the widened block
    for (std::size_t u = 0; u < rl; ++u)
      zero_range(row(r0 + u), c0 + rl, c0 + rl + rr);
  }

  std::size_t nrows_, ncols_, stride_;
  std::uint64_t* data_;
  std::size_t block_;
  std::vector<std::uint32_t> rowidx_;
  std::vector<std::uint32_t> pivot_cols_;
  std::vector<std::uint64_t> table_, srcbuf_, movebuf_, mult_, panel_;
  std::vector<std::uint8_t> selcache_, selany_, bcol_, selb_;
};

}  // namespace

PluqResult pluq_decompose(const BitMatrix& a, std::size_t block_cols) {
  BitMatrix work = a;
  Eliminator elim(work, block_cols);
  PluqResult res;
  res.rank = elim.run();
  res.row_perm = elim.row_order();
  const auto& pcols = elim.pivot_columns();
  res.col_perm.reserve(a.cols());
  res.col_perm.assign(pcols.begin(), pcols.end());
  std::vector<std::uint8_t> used(a.cols(), 0);
  for (std::uint32_t c : pcols) used[c] = 1;
  for (std::uint32_t c = 0; c < a.cols(); ++c)
    if (!used[c]) res.col_perm.push_back(c);
  res.pivots.reserve(res.rank);
  for (std::size_t k = 0; k < res.rank; ++k)
    res.pivots.emplace_back(res.row_perm[k], pcols[k]);
  return res;
}

std::size_t gf2_rank(const BitMatrix& a, std::size_t block_cols) {
  BitMatrix work = a;
  return gf2_rank_destructive(work, block_cols);
}

std::size_t gf2_rank_destructive(BitMatrix& a, std::size_t block_cols) {
  Eliminator elim(a, block_cols);
  return elim.run();
}

}  // namespace aesrank
