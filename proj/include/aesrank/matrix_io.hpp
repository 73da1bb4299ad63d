#pragma once

#include <filesystem>
#include <iosfwd>

#include "aesrank/bitmatrix.hpp"

namespace aesrank {

// Binary matrix container ("GF2M"): 4-byte magic "GF2M", u32 format version
// (currently 1), u64 row count, u64 column count -- all little-endian --
// followed by the rows in row-major order, each packed into little-endian
// 64-bit words and padded to a whole word.

inline constexpr std::uint32_t kGf2mVersion = 1;

void save_gf2m(const BitMatrix& m, std::ostream& out);
void save_gf2m(const BitMatrix& m, const std::filesystem::path& path);

BitMatrix load_gf2m(std::istream& in);
BitMatrix load_gf2m(const std::filesystem::path& path);

}  // namespace aesrank
