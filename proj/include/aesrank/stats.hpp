#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aesrank/census.hpp"

namespace aesrank {

// Rank distribution of a uniformly random n x n matrix over GF(2).
struct RankDistribution {
  std::size_t n = 0;
  double p_full = 0;    // P(rank = n)
  double p_second = 0;  // P(rank = n-1) -- the most probable rank for n >= 2
  double p_tail = 0;    // P(rank <= n-2)
  std::vector<double> full;  // p_0 .. p_n
};

// Exact in log2-space: the number of rank-r matrices is
//   N(r) = qbinom(n, r)_2 * prod_{i<r} (2^n - 2^i),
// evaluated through the O(1) step ratio
//   N(r+1)/N(r) = (2^n - 2^r)^2 / (2^r * (2^{r+1} - 1)),
// so the full vector costs O(n).
RankDistribution square_rank_distribution(std::size_t n);

// P(rank = r) for a uniform n x n GF(2) matrix.
double rank_probability(std::size_t n, std::size_t r);

// A bin of ranks, both ends inclusive.
struct RankBin {
  std::size_t lo;
  std::size_t hi;
  bool operator==(const RankBin&) const = default;
};

// The two standard binnings: {rank > n-2, rank <= n-2} and
// {rank = n, rank = n-1, rank <= n-2}, high ranks first.
std::vector<RankBin> two_bins(std::size_t n);
std::vector<RankBin> three_bins(std::size_t n);

std::string bin_label(const RankBin& bin, std::size_t n);

// Throws unless the bins exactly partition {0 .. n}.
void validate_bins(std::span<const RankBin> bins, std::size_t n);

// Expected census counts: n_windows * P(rank in bin), per bin.
std::vector<double> expected_census(std::uint64_t n_windows, std::span<const RankBin> bins,
                                    std::size_t n);

// Observed counts of a census folded into bins.  Ranks outside every bin
// (i.e. above n) throw.
std::vector<std::uint64_t> bin_census(const RankCensus& census,
                                      std::span<const RankBin> bins);

inline constexpr double kDefaultThreshold = 0.05;

struct ChiSquareResult {
  double statistic = 0;
  unsigned df = 0;
  double p_value = 1;
  double threshold = kDefaultThreshold;
  // True when the observed data deviate significantly from the model,
  // i.e. p_value < threshold.
  bool significant = false;
};

// Pearson goodness-of-fit: statistic = sum (o-e)^2/e with df = bins-1.
// Requires >= 2 bins of matching count and strictly positive expectations.
ChiSquareResult chi_square(std::span<const std::uint64_t> observed,
                           std::span<const double> expected,
                           double threshold = kDefaultThreshold);

// Upper-tail probability P(X >= x) for a chi-square variable with df degrees
// of freedom, via the regularized incomplete gamma function Q(df/2, x/2).
// Throws for negative x or df = 0.
double chi2_upper_tail(double x, unsigned df);

// One arm of the experiment after pooling its censuses.
struct ArmSummary {
  std::uint64_t windows = 0;
  std::vector<std::uint64_t> observed;  // per bin
  std::vector<double> deviation;        // observed - expected, signed per bin
  ChiSquareResult chi2;
};

struct VerdictReport {
  std::size_t n = 0;
  std::vector<RankBin> bins;
  std::vector<std::string> bin_labels;
  std::vector<double> expected_aes;     // for the AES arm's window total
  std::vector<double> expected_random;  // for the random arm's window total
  ArmSummary aes;
  ArmSummary random;
  double ratio = 1;  // p_aes / p_random
  double threshold = kDefaultThreshold;
  // The distinguisher fires when the AES arm rejects the random-matrix model
  // while the baseline arm does not.
  bool distinguished = false;
};

// Pools each arm, tests both against the theoretical census and combines the
// two p-values into the distinguishing verdict.
VerdictReport verdict(std::span<const RankCensus> aes_censuses,
                      std::span<const RankCensus> random_censuses,
                      std::span<const RankBin> bins, std::size_t n,
                      double threshold = kDefaultThreshold);

}  // namespace aesrank
