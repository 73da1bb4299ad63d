#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aesrank/bitmatrix.hpp"

namespace aesrank {

// GF(2^m) for m <= 8, presented on the polynomial basis (bit j of an element
// is the coefficient of x^j), together with a chosen primitive element eta.
// Construction validates that eta really generates the full multiplicative
// group under the given reduction polynomial.
class GfField {
public:
  GfField(unsigned m, std::uint16_t poly, std::uint8_t eta);

  unsigned degree() const noexcept { return m_; }
  std::uint16_t modulus() const noexcept { return poly_; }
  std::uint8_t eta() const noexcept { return eta_; }
  std::size_t order() const noexcept { return std::size_t{1} << m_; }

  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const;
  std::uint8_t eta_pow(unsigned i) const { return exp_[i % (order() - 1)]; }
  unsigned log_eta(std::uint8_t x) const;  // throws for x = 0

  // Index of the nonzero coordinate of the one-hot embedding: 0 maps to
  // coordinate 0 and eta^i maps to coordinate i+1.
  unsigned one_hot_index(std::uint8_t x) const { return x ? log_eta(x) + 1 : 0; }

  // Multiplication by eta as an m x m matrix over GF(2).
  BitMatrix eta_multiplication_matrix() const;

private:
  unsigned m_;
  std::uint16_t poly_;
  std::uint8_t eta_;
  std::array<std::uint8_t, 256> exp_{};
  std::array<std::uint8_t, 256> log_{};
};

// Parameters of the rank-space embedding: vectors of b elements of GF(2^m)
// are mapped through the powers M^0 .. M^(t-1) of a mixing matrix M of
// multiplicative order t, and each element of each image is spread one-hot
// over 2^m coordinates.  The ambient space therefore has 2^m * b * t
// dimensions.
class EmbeddingParams {
public:
  // t is derived from `mixing` as its multiplicative order (bounded by 256;
  // non-invertible or higher-order matrices are rejected).  The matrix must
  // be (m*b) x (m*b).
  static EmbeddingParams create(const GfField& field, unsigned b, const BitMatrix& mixing);

  // The cipher instance: GF(2^8) with the Rijndael polynomial, eta = 0x03,
  // b = 16 state bytes, M = the mixing layer (order 8).
  static EmbeddingParams aes();

  const GfField& field() const noexcept { return field_; }
  unsigned element_bits() const noexcept { return field_.degree(); }
  unsigned elements() const noexcept { return b_; }
  unsigned order() const noexcept { return t_; }

  const BitMatrix& mixing() const noexcept { return powers_[1 % powers_.size()]; }
  const BitMatrix& mixing_power(unsigned j) const;  // M^j for j < t

  std::size_t vector_bits() const noexcept { return std::size_t{m()} * b_; }
  std::size_t ambient_dim() const noexcept { return field_.order() * b_ * t_; }

  // Whether M commutes with scalar multiplication by eta applied
  // elementwise, i.e. M is linear over GF(2^m) and not merely over GF(2).
  bool byte_oriented() const noexcept { return byte_oriented_; }

  // Upper bound on the dimension of the span of the embedding's image:
  //   2^m * b * t - (b*t - 1) - m*b*(t - 1).
  // Only meaningful (and only callable) for byte-oriented M.
  std::size_t dimension_bound() const;

private:
  unsigned m() const noexcept { return field_.degree(); }
  EmbeddingParams(GfField field, unsigned b, std::vector<BitMatrix> powers,
                  bool byte_oriented)
      : field_(field), b_(b), t_(unsigned(powers.size())), powers_(std::move(powers)),
        byte_oriented_(byte_oriented) {}

  GfField field_;
  unsigned b_;
  unsigned t_;
  std::vector<BitMatrix> powers_;  // M^0 .. M^(t-1)
  bool byte_oriented_;
};

// One-hot embedding of a single field element, unpacked (2^m entries, 0/1).
std::vector<std::uint8_t> epsilon_prime(const GfField& field, std::uint8_t x);

// The full embedding of one vector (given as its b field elements), written
// into a pre-zeroed packed row of at least (ambient_dim+63)/64 words.
// Exactly b*t bits are set.
void alpha_row(const EmbeddingParams& params, std::span<const std::uint8_t> elements,
               std::uint64_t* out_row);

// Unpacked convenience form of alpha_row (ambient_dim entries, 0/1).
std::vector<std::uint8_t> alpha(const EmbeddingParams& params,
                                std::span<const std::uint8_t> elements);

// Dimension of the span of alpha over the vectors produced by `sampler`
// (called with 0 .. max_samples-1; each result must have b entries).
std::size_t span_dimension(const EmbeddingParams& params,
                           const std::function<std::vector<std::uint8_t>(std::size_t)>& sampler,
                           std::size_t max_samples);

}  // namespace aesrank
