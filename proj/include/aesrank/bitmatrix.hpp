#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aesrank {

// Dense bit-packed matrix over GF(2).
//
// Rows are stored contiguously as 64-bit words in little-endian bit order:
// column j lives in bit (j mod 64) of word (j div 64) of its row.  Rows are
// padded to a whole number of words and the padding bits are kept zero; all
// mutating operations preserve that invariant.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t nrows, std::size_t ncols);

  static BitMatrix identity(std::size_t n);

  // Builds a matrix from unpacked rows (one byte per bit, values 0/1).
  // Every row must have exactly ncols entries.
  static BitMatrix from_rows(std::span<const std::vector<std::uint8_t>> rows,
                             std::size_t ncols);

  std::size_t rows() const noexcept { return nrows_; }
  std::size_t cols() const noexcept { return ncols_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, bool value);

  std::uint64_t* row_data(std::size_t i) noexcept { return data_.data() + i * stride_; }
  const std::uint64_t* row_data(std::size_t i) const noexcept {
    return data_.data() + i * stride_;
  }
  std::span<std::uint64_t> row_span(std::size_t i) noexcept {
    return {row_data(i), stride_};
  }
  std::span<const std::uint64_t> row_span(std::size_t i) const noexcept {
    return {row_data(i), stride_};
  }

  // Number of set bits in row i / in the whole matrix.
  std::uint64_t row_weight(std::size_t i) const;
  std::uint64_t weight() const;

  bool row_is_zero(std::size_t i) const;
  void clear();

  BitMatrix transposed() const;

  bool operator==(const BitMatrix&) const = default;

private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

// out = m * in, where `in` is a column vector of m.cols() bits packed into
// words and `out` receives m.rows() bits.  Aliasing is not allowed.
void gf2_matvec(const BitMatrix& m, std::span<const std::uint64_t> in,
                std::span<std::uint64_t> out);

}  // namespace aesrank
