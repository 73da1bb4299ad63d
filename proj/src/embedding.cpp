#include "aesrank/embedding.hpp"

#include <sstream>
#include <stdexcept>

#include "aesrank/aes.hpp"
#include "aesrank/pluq.hpp"

namespace aesrank {

GfField::GfField(unsigned m, std::uint16_t poly, std::uint8_t eta)
    : m_(m), poly_(poly), eta_(eta) {
  if (m < 1 || m > 8) throw std::invalid_argument("GfField: need 1 <= m <= 8");
  if ((poly >> m) != 1) {
    std::ostringstream msg;
    msg << "GfField: reduction polynomial 0x" << std::hex << poly
        << " does not have degree " << std::dec << m;
    throw std::invalid_argument(msg.str());
  }
  const std::size_t group = order() - 1;
  if (eta >= order()) throw std::invalid_argument("GfField: eta outside the field");
  std::uint8_t x = 1;
  for (std::size_t i = 0; i < group; ++i) {
    if (x == 0) throw std::invalid_argument("GfField: polynomial is not irreducible");
    if (i > 0 && x == 1)
      throw std::invalid_argument("GfField: eta is not primitive");
    exp_[i] = x;
    log_[x] = std::uint8_t(i);
    x = mul(x, eta);
  }
  if (x != 1) throw std::invalid_argument("GfField: eta is not primitive");
}

std::uint8_t GfField::mul(std::uint8_t a, std::uint8_t b) const {
  std::uint16_t acc = 0;
  std::uint16_t aa = a;
  while (b) {
    if (b & 1) acc ^= aa;
    aa <<= 1;
    if (aa & (std::uint16_t{1} << m_)) aa ^= poly_;
    b >>= 1;
  }
  return std::uint8_t(acc);
}

unsigned GfField::log_eta(std::uint8_t x) const {
  if (x == 0) throw std::invalid_argument("GfField::log_eta: zero has no logarithm");
  if (x >= order()) throw std::invalid_argument("GfField::log_eta: outside the field");
  return log_[x];
}

BitMatrix GfField::eta_multiplication_matrix() const {
  BitMatrix s(m_, m_);
  for (unsigned j = 0; j < m_; ++j) {
    const std::uint8_t img = mul(eta_, std::uint8_t(1u << j));
    for (unsigned i = 0; i < m_; ++i)
      if ((img >> i) & 1) s.set(i, j, true);
  }
  return s;
}

EmbeddingParams EmbeddingParams::create(const GfField& field, unsigned b,
                                        const BitMatrix& mixing) {
  if (b == 0) throw std::invalid_argument("EmbeddingParams: b must be positive");
  const std::size_t mb = std::size_t{field.degree()} * b;
  if (mixing.rows() != mb || mixing.cols() != mb) {
    std::ostringstream msg;
    msg << "EmbeddingParams: mixing matrix is " << mixing.rows() << "x" << mixing.cols()
        << ", expected " << mb << "x" << mb;
    throw std::invalid_argument(msg.str());
  }

  // t = multiplicative order of the mixing matrix
  constexpr unsigned kOrderCap = 256;
  const BitMatrix ident = BitMatrix::identity(mb);
  std::vector<BitMatrix> powers;
  powers.push_back(ident);
  BitMatrix p = mixing;
  unsigned t = 0;
  for (unsigned i = 1; i <= kOrderCap; ++i) {
    if (p == ident) {
      t = i;
      break;
    }
    powers.push_back(p);
    p = m4rm_multiply(mixing, p);
  }
  if (t == 0)
    throw std::invalid_argument(
        "EmbeddingParams: mixing matrix has no multiplicative order <= 256");

  // byte-orientation: M commutes with elementwise multiplication by eta
  BitMatrix scalar(mb, mb);
  const BitMatrix s_eta = field.eta_multiplication_matrix();
  const unsigned m = field.degree();
  for (unsigned e = 0; e < b; ++e)
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j)
        if (s_eta.get(i, j)) scalar.set(e * m + i, e * m + j, true);
  const bool byte_oriented =
      m4rm_multiply(mixing, scalar) == m4rm_multiply(scalar, mixing);

  return EmbeddingParams(field, b, std::move(powers), byte_oriented);
}

EmbeddingParams EmbeddingParams::aes() {
  static const EmbeddingParams params =
      create(GfField(8, 0x11b, 0x03), 16, lambda_matrix());
  return params;
}

const BitMatrix& EmbeddingParams::mixing_power(unsigned j) const {
  if (j >= t_) throw std::out_of_range("EmbeddingParams::mixing_power");
  return powers_[j];
}

std::size_t EmbeddingParams::dimension_bound() const {
  if (!byte_oriented_)
    throw std::logic_error(
        "EmbeddingParams::dimension_bound: mixing matrix is not byte-oriented");
  const std::size_t bt = std::size_t{b_} * t_;
  return field_.order() * bt - (bt - 1) - vector_bits() * (t_ - 1);
}

std::vector<std::uint8_t> epsilon_prime(const GfField& field, std::uint8_t x) {
  std::vector<std::uint8_t> out(field.order(), 0);
  out[field.one_hot_index(x)] = 1;
  return out;
}

void alpha_row(const EmbeddingParams& params, std::span<const std::uint8_t> elements,
               std::uint64_t* out_row) {
  const unsigned b = params.elements();
  const unsigned m = params.element_bits();
  if (elements.size() != b) {
    std::ostringstream msg;
    msg << "alpha_row: expected " << b << " elements, got " << elements.size();
    throw std::invalid_argument(msg.str());
  }
  const std::size_t slot = params.field().order();
  const std::size_t vwords = (params.vector_bits() + 63) / 64;
  std::uint64_t vin[3] = {0, 0, 0}, vout[3] = {0, 0, 0};
  if (vwords > 3) throw std::logic_error("alpha_row: vector too wide");
  const std::uint8_t elem_mask = std::uint8_t((std::uint16_t{1} << m) - 1);
  for (unsigned i = 0; i < b; ++i) {
    if (elements[i] & ~elem_mask)
      throw std::invalid_argument("alpha_row: element outside the field");
    const std::size_t bit = std::size_t{i} * m;
    vin[bit >> 6] |= std::uint64_t(elements[i]) << (bit & 63);
    if ((bit & 63) + m > 64)
      vin[(bit >> 6) + 1] |= std::uint64_t(elements[i]) >> (64 - (bit & 63));
  }
  for (unsigned j = 0; j < params.order(); ++j) {
    const std::uint64_t* w;
    if (j == 0) {
      w = vin;
    } else {
      gf2_matvec(params.mixing_power(j), std::span<const std::uint64_t>(vin, vwords),
                 std::span<std::uint64_t>(vout, vwords));
      w = vout;
    }
    const std::size_t base = std::size_t{j} * params.elements() * slot;
    for (unsigned i = 0; i < b; ++i) {
      const std::size_t bit = std::size_t{i} * m;
      std::uint8_t elem = std::uint8_t(w[bit >> 6] >> (bit & 63));
      if ((bit & 63) + m > 64)
        elem |= std::uint8_t(w[(bit >> 6) + 1] << (64 - (bit & 63)));
      elem &= elem_mask;
      const std::size_t pos = base + std::size_t{i} * slot + params.field().one_hot_index(elem);
      out_row[pos >> 6] |= std::uint64_t{1} << (pos & 63);
    }
  }
}

std::vector<std::uint8_t> alpha(const EmbeddingParams& params,
                                std::span<const std::uint8_t> elements) {
  const std::size_t s = params.ambient_dim();
  std::vector<std::uint64_t> packed((s + 63) / 64, 0);
  alpha_row(params, elements, packed.data());
  std::vector<std::uint8_t> out(s);
  for (std::size_t i = 0; i < s; ++i) out[i] = (packed[i >> 6] >> (i & 63)) & 1;
  return out;
}

std::size_t span_dimension(
    const EmbeddingParams& params,
    const std::function<std::vector<std::uint8_t>(std::size_t)>& sampler,
    std::size_t max_samples) {
  BitMatrix m(max_samples, params.ambient_dim());
  for (std::size_t i = 0; i < max_samples; ++i) {
    const std::vector<std::uint8_t> v = sampler(i);
    alpha_row(params, v, m.row_data(i));
  }
  return gf2_rank_destructive(m);
}

}  // namespace aesrank
