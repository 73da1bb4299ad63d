#include "aesrank/aes.hpp"

#include <sstream>
#include <stdexcept>

namespace aesrank {

namespace {

// GF(2^8) with the Rijndael reduction polynomial x^8 + x^4 + x^3 + x + 1.
constexpr std::uint16_t kRijndaelPoly = 0x11b;

constexpr std::uint8_t xtime(std::uint8_t a) {
  return std::uint8_t((a << 1) ^ ((a & 0x80) ? (kRijndaelPoly & 0xff) : 0));
}

constexpr std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return acc;
}

struct SboxTables {
  std::array<std::uint8_t, 256> fwd;
  SboxTables() {
    // inverses via exp/log over the generator 0x03, then the affine map
    std::array<std::uint8_t, 256> exp{}, log{};
    std::uint8_t x = 1;
    for (unsigned i = 0; i < 255; ++i) {
      exp[i] = x;
      log[x] = std::uint8_t(i);
      x = std::uint8_t(gf_mul(x, 0x03));
    }
    for (unsigned v = 0; v < 256; ++v) {
      const std::uint8_t inv = v ? exp[(255 - log[v]) % 255] : 0;
      std::uint8_t s = 0;
      for (unsigned bit = 0; bit < 8; ++bit) {
        const unsigned parity = ((inv >> bit) ^ (inv >> ((bit + 4) & 7)) ^
                                 (inv >> ((bit + 5) & 7)) ^ (inv >> ((bit + 6) & 7)) ^
                                 (inv >> ((bit + 7) & 7)) ^ (0x63 >> bit)) &
                                1;
        s |= std::uint8_t(parity << bit);
      }
      fwd[v] = s;
    }
  }
};

const SboxTables& sbox_tables() {
  static const SboxTables tables;
  return tables;
}

Block shift_rows(const Block& v) {
  Block out;
  for (unsigned r = 0; r < 4; ++r)
    for (unsigned c = 0; c < 4; ++c) out[r + 4 * c] = v[r + 4 * ((c + r) & 3)];
  return out;
}

Block mix_columns(const Block& v) {
  Block out;
  for (unsigned c = 0; c < 4; ++c) {
    const std::uint8_t a0 = v[4 * c], a1 = v[4 * c + 1], a2 = v[4 * c + 2],
                       a3 = v[4 * c + 3];
    out[4 * c + 0] = std::uint8_t(gf_mul(a0, 2) ^ gf_mul(a1, 3) ^ a2 ^ a3);
    out[4 * c + 1] = std::uint8_t(a0 ^ gf_mul(a1, 2) ^ gf_mul(a2, 3) ^ a3);
    out[4 * c + 2] = std::uint8_t(a0 ^ a1 ^ gf_mul(a2, 2) ^ gf_mul(a3, 3));
    out[4 * c + 3] = std::uint8_t(gf_mul(a0, 3) ^ a1 ^ a2 ^ gf_mul(a3, 2));
  }
  return out;
}

}  // namespace

std::uint8_t sbox(std::uint8_t x) { return sbox_tables().fwd[x]; }

CipherKey CipherKey::schedule(std::span<const std::uint8_t> key_bytes) {
  const std::size_t nk_bytes = key_bytes.size();
  if (nk_bytes != 16 && nk_bytes != 24 && nk_bytes != 32) {
    std::ostringstream msg;
    msg << "CipherKey: key must be 16, 24 or 32 bytes, got " << nk_bytes;
    throw std::invalid_argument(msg.str());
  }
  const unsigned nk = unsigned(nk_bytes / 4);
  const unsigned rounds = nk + 6;
  const unsigned nwords = 4 * (rounds + 1);

  std::vector<std::array<std::uint8_t, 4>> w(nwords);
  for (unsigned i = 0; i < nk; ++i)
    w[i] = {key_bytes[4 * i], key_bytes[4 * i + 1], key_bytes[4 * i + 2],
            key_bytes[4 * i + 3]};
  std::uint8_t rcon = 0x01;
  for (unsigned i = nk; i < nwords; ++i) {
    std::array<std::uint8_t, 4> t = w[i - 1];
    if (i % nk == 0) {
      t = {std::uint8_t(sbox(t[1]) ^ rcon), sbox(t[2]), sbox(t[3]), sbox(t[0])};
      rcon = xtime(rcon);
    } else if (nk > 6 && i % nk == 4) {
      t = {sbox(t[0]), sbox(t[1]), sbox(t[2]), sbox(t[3])};
    }
    for (unsigned b = 0; b < 4; ++b) t[b] ^= w[i - nk][b];
    w[i] = t;
  }

  CipherKey ck;
  ck.rounds_ = rounds;
  ck.key_len_ = nk_bytes;
  ck.round_keys_.resize(rounds + 1);
  for (unsigned rk = 0; rk <= rounds; ++rk)
    for (unsigned c = 0; c < 4; ++c)
      for (unsigned r = 0; r < 4; ++r) ck.round_keys_[rk][r + 4 * c] = w[4 * rk + c][r];
  return ck;
}

const Block& CipherKey::round_key(unsigned i) const {
  if (i >= round_keys_.size()) throw std::out_of_range("CipherKey::round_key");
  return round_keys_[i];
}

Block gamma(const Block& v) {
  Block out;
  for (unsigned i = 0; i < 16; ++i) out[i] = sbox(v[i]);
  return out;
}

Block lambda(const Block& v) { return mix_columns(shift_rows(v)); }

Block lambda_bar(const Block& v) { return shift_rows(v); }

Block sigma(const Block& v, const Block& key) {
  Block out;
  for (unsigned i = 0; i < 16; ++i) out[i] = std::uint8_t(v[i] ^ key[i]);
  return out;
}

RoundComponents round_components(const Block& v, const Block& round_key) {
  RoundComponents rc;
  rc.after_gamma = gamma(v);
  rc.after_lambda = lambda(rc.after_gamma);
  rc.after_sigma = sigma(rc.after_lambda, round_key);
  return rc;
}

Block encrypt(const CipherKey& key, const Block& in, const RoundSpec& spec) {
  if (spec.rounds > key.rounds()) {
    std::ostringstream msg;
    msg << "encrypt: " << spec.rounds << " rounds requested but the key supports "
        << key.rounds();
    throw std::invalid_argument(msg.str());
  }
  Block state = sigma(in, key.round_key(0));
  for (unsigned r = 1; r <= spec.rounds; ++r) {
    state = gamma(state);
    state = (r == spec.rounds && spec.final_round_atypical) ? lambda_bar(state)
                                                            : lambda(state);
    state = sigma(state, key.round_key(r));
  }
  return state;
}

Block encrypt(const CipherKey& key, const Block& in) {
  return encrypt(key, in, RoundSpec::full(key));
}

BitMatrix lambda_matrix() {
  BitMatrix m(128, 128);
  for (unsigned j = 0; j < 128; ++j) {
    Block e{};
    e[j >> 3] = std::uint8_t(1u << (j & 7));
    const Block img = lambda(e);
    for (unsigned i = 0; i < 128; ++i)
      if ((img[i >> 3] >> (i & 7)) & 1) m.set(i, j, true);
  }
  return m;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

std::vector<std::uint8_t> bytes_from_hex(std::string_view hex) {
  if (hex.size() % 2) throw std::invalid_argument("bytes_from_hex: odd length");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return unsigned(c - '0');
    if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
    throw std::invalid_argument("bytes_from_hex: invalid character");
  };
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::uint8_t((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  return out;
}

Block block_from_hex(std::string_view hex) {
  const auto bytes = bytes_from_hex(hex);
  if (bytes.size() != 16) {
    std::ostringstream msg;
    msg << "block_from_hex: expected 16 bytes, got " << bytes.size();
    throw std::invalid_argument(msg.str());
  }
  Block b;
  std::copy(bytes.begin(), bytes.end(), b.begin());
  return b;
}

}  // namespace aesrank
