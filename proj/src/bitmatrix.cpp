#include "aesrank/bitmatrix.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace aesrank {

BitMatrix::BitMatrix(std::size_t nrows, std::size_t ncols)
    : nrows_(nrows), ncols_(ncols), stride_((ncols + 63) / 64),
      data_(nrows * ((ncols + 63) / 64), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const std::vector<std::uint8_t>> rows,
                               std::size_t ncols) {
  BitMatrix m(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) {
      std::ostringstream msg;
      msg << "from_rows: row " << i << " has " << rows[i].size()
          << " entries, expected " << ncols;
      throw std::invalid_argument(msg.str());
    }
    for (std::size_t j = 0; j < ncols; ++j)
      if (rows[i][j]) m.set(i, j, true);
  }
  return m;
}

bool BitMatrix::get(std::size_t i, std::size_t j) const {
  if (i >= nrows_ || j >= ncols_) throw std::out_of_range("BitMatrix::get");
  return (row_data(i)[j >> 6] >> (j & 63)) & 1;
}

void BitMatrix::set(std::size_t i, std::size_t j, bool value) {
  if (i >= nrows_ || j >= ncols_) throw std::out_of_range("BitMatrix::set");
  std::uint64_t bit = std::uint64_t{1} << (j & 63);
  if (value)
    row_data(i)[j >> 6] |= bit;
  else
    row_data(i)[j >> 6] &= ~bit;
}

std::uint64_t BitMatrix::row_weight(std::size_t i) const {
  std::uint64_t w = 0;
  for (std::uint64_t word : row_span(i)) w += std::popcount(word);
  return w;
}

std::uint64_t BitMatrix::weight() const {
  std::uint64_t w = 0;
  for (std::uint64_t word : data_) w += std::popcount(word);
  return w;
}

bool BitMatrix::row_is_zero(std::size_t i) const {
  for (std::uint64_t word : row_span(i))
    if (word) return false;
  return true;
}

void BitMatrix::clear() { std::fill(data_.begin(), data_.end(), 0); }

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(ncols_, nrows_);
  for (std::size_t i = 0; i < nrows_; ++i) {
    const std::uint64_t* r = row_data(i);
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t word = r[w];
      while (word) {
        unsigned b = std::countr_zero(word);
        word &= word - 1;
        t.set(w * 64 + b, i, true);
      }
    }
  }
  return t;
}

void gf2_matvec(const BitMatrix& m, std::span<const std::uint64_t> in,
                std::span<std::uint64_t> out) {
  const std::size_t wpr = m.words_per_row();
  if (in.size() < wpr || out.size() < (m.rows() + 63) / 64)
    throw std::invalid_argument("gf2_matvec: vector too short");
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::uint64_t* r = m.row_data(i);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < wpr; ++w) acc ^= r[w] & in[w];
    if (std::popcount(acc) & 1) out[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
}

}  // namespace aesrank
