#include "aesrank/matrix_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aesrank {

namespace {

constexpr std::array<char, 4> kMagic = {'G', 'F', '2', 'M'};

template <typename T>
void write_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

template <typename T>
T read_le(std::istream& in) {
  std::array<char, sizeof(T)> buf;
  in.read(buf.data(), buf.size());
  if (!in) throw std::runtime_error("gf2m: truncated input");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    value |= static_cast<T>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return value;
}

}  // namespace

void save_gf2m(const BitMatrix& m, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  write_le<std::uint32_t>(out, kGf2mVersion);
  write_le<std::uint64_t>(out, m.rows());
  write_le<std::uint64_t>(out, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::uint64_t word : m.row_span(i)) write_le<std::uint64_t>(out, word);
  if (!out) throw std::runtime_error("gf2m: write failed");
}

void save_gf2m(const BitMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("gf2m: cannot open " + path.string());
  save_gf2m(m, out);
}

BitMatrix load_gf2m(std::istream& in) {
  std::array<char, 4> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("gf2m: bad magic");
  std::uint32_t version = read_le<std::uint32_t>(in);
  if (version != kGf2mVersion) {
    std::ostringstream msg;
    msg << "gf2m: unsupported version " << version;
    throw std::runtime_error(msg.str());
  }
  std::uint64_t nrows = read_le<std::uint64_t>(in);
  std::uint64_t ncols = read_le<std::uint64_t>(in);
  if (ncols > 0 && nrows > std::numeric_limits<std::uint64_t>::max() / ((ncols + 63) / 64) / 8)
    throw std::runtime_error("gf2m: implausible dimensions");
  BitMatrix m(static_cast<std::size_t>(nrows), static_cast<std::size_t>(ncols));
  const std::uint64_t pad_mask =
      (ncols % 64) ? ((std::uint64_t{1} << (ncols % 64)) - 1) : ~std::uint64_t{0};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t* row = m.row_data(i);
    for (std::size_t w = 0; w < m.words_per_row(); ++w) {
      row[w] = read_le<std::uint64_t>(in);
      if (w + 1 == m.words_per_row() && (row[w] & ~pad_mask))
        throw std::runtime_error("gf2m: nonzero padding bits");
    }
  }
  return m;
}

BitMatrix load_gf2m(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("gf2m: cannot open " + path.string());
  return load_gf2m(in);
}

}  // namespace aesrank
