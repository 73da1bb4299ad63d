#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "aesrank/bitmatrix.hpp"

namespace aesrank {

// Result of a full PLUQ factorisation P*A*Q = L*U.
//
// row_perm[i] is the original index of the row placed at position i by P;
// col_perm[j] is the original index of the column placed at position j by Q.
// The first `rank` entries of each are the pivot rows/columns in elimination
// order, followed by the non-pivot indices in ascending order.  pivots[k]
// holds the k-th pivot in original (row, column) coordinates; the pivot
// columns are strictly increasing.
struct PluqResult {
  std::size_t rank = 0;
  std::vector<std::uint32_t> row_perm;
  std::vector<std::uint32_t> col_perm;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pivots;
};

// Column width at or below which the blocked elimination switches to its
// Four-Russians base case.  The default suits a ~1 MiB L2 slice.
inline constexpr std::size_t kDefaultBlockCols = 512;
inline constexpr std::size_t kNoBlocking = std::numeric_limits<std::size_t>::max();

// Cache-blocked recursive PLE elimination with full (rook-free, first-fit)
// pivoting.  `block_cols` caps the width of the recursion's base case.
PluqResult pluq_decompose(const BitMatrix& a, std::size_t block_cols = kDefaultBlockCols);

// Rank via the same elimination, without materialising the permutations.
std::size_t gf2_rank(const BitMatrix& a, std::size_t block_cols = kDefaultBlockCols);

// In-place variant: `a` is consumed as elimination workspace.
std::size_t gf2_rank_destructive(BitMatrix& a, std::size_t block_cols = kDefaultBlockCols);

// Matrix product over GF(2) via the method of the Four Russians.
// Throws std::invalid_argument when a.cols() != b.rows().
BitMatrix m4rm_multiply(const BitMatrix& a, const BitMatrix& b);

}  // namespace aesrank
