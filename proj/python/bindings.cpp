// Python bindings for the rank-census library: the cipher, the embedding,
// GF(2) rank, the census pipeline and the census statistics.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aesrank/aes.hpp"
#include "aesrank/distinguisher.hpp"
#include "aesrank/embedding.hpp"
#include "aesrank/matrix_io.hpp"
#include "aesrank/pluq.hpp"
#include "aesrank/selftest.hpp"
#include "aesrank/stats.hpp"

namespace py = pybind11;
using namespace aesrank;

namespace {

Block to_block(const py::bytes& b) {
  const std::string s = b;
  if (s.size() != 16) throw std::invalid_argument("expected exactly 16 bytes");
  Block out;
  std::copy(s.begin(), s.end(), reinterpret_cast<char*>(out.data()));
  return out;
}

py::bytes from_block(const Block& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<std::uint8_t> to_byte_vector(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

PairOrder to_pair_order(int dominant_byte) {
  if (dominant_byte == 15) return PairOrder::kByte15Dominant;
  if (dominant_byte == 16) return PairOrder::kByte16Dominant;
  throw std::invalid_argument("pair_order must be 15 or 16");
}

OrderedSet make_set(const std::string& arm, unsigned rounds, std::uint64_t seed,
                    std::uint32_t key_index, int pair_order, std::size_t key_bytes) {
  OrderedSet set = build_sbar(to_pair_order(pair_order));
  if (arm == "plain") return set;
  if (arm == "aes") {
    const CtrPrng prng(seed);
    std::vector<std::uint8_t> kb(key_bytes);
    prng.fill(prng_domain::kExperimentKeys, std::uint64_t{key_index} * 4, kb);
    const CipherKey key = CipherKey::schedule(kb);
    return encrypt_set(set, key, RoundSpec::reduced(rounds));
  }
  if (arm == "random") return random_sample_set(CtrPrng(seed), key_index);
  throw std::invalid_argument("arm must be 'plain', 'aes' or 'random'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "rank-census distinguishing experiments on reduced-round AES";
  m.attr("__version__") = "0.1.0";
  m.attr("WINDOW_ROWS") = kWindowRows;
  m.attr("NUM_WINDOWS") = kNumWindows;
  m.attr("SET_SIZE") = kSetSize;
  m.attr("AMBIENT_DIM") = kAmbientDim;

  // --- cipher ---
  m.def(
      "encrypt",
      [](const py::bytes& key, const py::bytes& block, py::object rounds) {
        const CipherKey k = CipherKey::schedule(to_byte_vector(key));
        const RoundSpec spec = rounds.is_none()
                                   ? RoundSpec::full(k)
                                   : RoundSpec::reduced(rounds.cast<unsigned>());
        return from_block(encrypt(k, to_block(block), spec));
      },
      py::arg("key"), py::arg("block"), py::arg("rounds") = py::none(),
      "Encrypt one 16-byte block; rounds=None means the full cipher.");

  m.def("sbox_table", [] {
    std::string t(256, '\0');
    for (int i = 0; i < 256; ++i) t[i] = static_cast<char>(sbox(static_cast<std::uint8_t>(i)));
    return py::bytes(t);
  });

  m.def("mixing_order", [] {
    const BitMatrix mm = lambda_matrix();
    const BitMatrix id = BitMatrix::identity(mm.rows());
    BitMatrix p = id;
    for (unsigned j = 1; j <= 16; ++j) {
      p = m4rm_multiply(p, mm);
      if (p == id) return j;
    }
    return 0u;
  });

  // --- embedding ---
  m.def("embedding_info", [] {
    const EmbeddingParams& params = EmbeddingParams::aes();
    py::dict d;
    d["ambient_dim"] = params.ambient_dim();
    d["dimension_bound"] = params.dimension_bound();
    d["order"] = params.order();
    d["byte_oriented"] = params.byte_oriented();
    d["elements"] = params.elements();
    d["element_bits"] = params.element_bits();
    return d;
  });

  m.def(
      "alpha_support",
      [](const py::bytes& block) {
        const EmbeddingParams& params = EmbeddingParams::aes();
        const std::vector<std::uint8_t> unpacked = alpha(params, to_block(block));
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < unpacked.size(); ++i) {
          if (unpacked[i]) support.push_back(i);
        }
        return support;
      },
      py::arg("block"), "Sorted indices of the set coordinates of alpha(block).");

  m.def(
      "sbar_element",
      [](std::size_t i, int pair_order) {
        if (i >= kSetSize) throw std::out_of_range("index must be below 65536");
        return from_block(build_sbar(to_pair_order(pair_order))[i]);
      },
      py::arg("i"), py::arg("pair_order") = 15);

  // --- GF(2) rank ---
  m.def(
      "rank_rows",
      [](const std::vector<py::bytes>& rows, std::size_t ncols) {
        std::vector<std::vector<std::uint8_t>> unpacked;
        unpacked.reserve(rows.size());
        for (const py::bytes& packed : rows) {
          const std::string s = packed;
          if (s.size() != (ncols + 7) / 8) {
            throw std::invalid_argument("each row must pack ncols bits into little-endian bytes");
          }
          std::vector<std::uint8_t> bits(ncols);
          for (std::size_t j = 0; j < ncols; ++j) {
            bits[j] = (static_cast<std::uint8_t>(s[j / 8]) >> (j % 8)) & 1;
          }
          unpacked.push_back(std::move(bits));
        }
        return gf2_rank(BitMatrix::from_rows(unpacked, ncols));
      },
      py::arg("rows"), py::arg("ncols"),
      "Rank of a GF(2) matrix given as packed little-endian row bytes.");

  m.def(
      "rank_gf2m",
      [](const std::string& path) {
        const BitMatrix mat = load_gf2m(std::filesystem::path(path));
        py::dict d;
        d["rows"] = mat.rows();
        d["cols"] = mat.cols();
        d["rank"] = gf2_rank(mat);
        return d;
      },
      py::arg("path"));

  // --- census pipeline ---
  m.def(
      "census",
      [](const std::string& arm, const std::vector<std::uint32_t>& window_starts,
         std::uint64_t seed, unsigned rounds, std::uint32_t key_index, int pair_order,
         std::size_t key_bytes, unsigned threads) {
        const OrderedSet set = make_set(arm, rounds, seed, key_index, pair_order, key_bytes);
        const RankCensus c = algorithm_b(set, window_starts, kDefaultBlockCols, threads);
        std::map<std::uint32_t, std::uint64_t> out(c.counts.begin(), c.counts.end());
        return out;
      },
      py::arg("arm"), py::arg("window_starts"), py::arg("seed") = 0, py::arg("rounds") = 10,
      py::arg("key_index") = 0, py::arg("pair_order") = 15, py::arg("key_bytes") = 16,
      py::arg("threads") = 1,
      "Rank census {rank: count} over the given 1-based window starts.");

  m.def("evenly_spaced_starts", &evenly_spaced_starts, py::arg("count"));

  // --- statistics ---
  m.def(
      "theory",
      [](std::size_t n) {
        const RankDistribution d = square_rank_distribution(n);
        py::dict out;
        out["n"] = d.n;
        out["p_full"] = d.p_full;
        out["p_second"] = d.p_second;
        out["p_tail"] = d.p_tail;
        return out;
      },
      py::arg("n") = kWindowRows);

  m.def(
      "rank_probability", [](std::size_t n, std::size_t r) { return rank_probability(n, r); },
      py::arg("n"), py::arg("r"));

  m.def(
      "expected_census",
      [](std::uint64_t windows, std::size_t n, unsigned bins) {
        const std::vector<RankBin> b = bins == 3 ? three_bins(n) : two_bins(n);
        return expected_census(windows, b, n);
      },
      py::arg("windows"), py::arg("n") = kWindowRows, py::arg("bins") = 2);

  m.def(
      "chi_square",
      [](const std::vector<std::uint64_t>& observed, const std::vector<double>& expected,
         double threshold) {
        const ChiSquareResult r = chi_square(observed, expected, threshold);
        py::dict d;
        d["statistic"] = r.statistic;
        d["df"] = r.df;
        d["p_value"] = r.p_value;
        d["significant"] = r.significant;
        return d;
      },
      py::arg("observed"), py::arg("expected"), py::arg("threshold") = kDefaultThreshold);

  m.def(
      "chi2_upper_tail", [](double x, unsigned df) { return chi2_upper_tail(x, df); },
      py::arg("x"), py::arg("df"));

  // --- selftest ---
  m.def(
      "run_selftest",
      [](bool spot_check) {
        SelfTestOptions options;
        options.spot_check = spot_check;
        const SelfTestResult result = run_selftest(options);
        py::list items;
        for (const SelfTestItem& item : result.items) {
          items.append(py::make_tuple(item.name, item.pass, item.detail));
        }
        return items;
      },
      py::arg("spot_check") = false);
}
