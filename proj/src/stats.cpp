#include "aesrank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aesrank {

namespace {

// log2(2^a - 2^i) = i + log2(2^(a-i) - 1), stable for any gap a-i > 0.
long double log2_pow_diff(std::size_t a, std::size_t i) {
  const long double gap = static_cast<long double>(a - i);
  // log2(2^gap - 1) = gap + log2(1 - 2^-gap)
  const long double correction = std::log1p(-std::exp2(-gap)) / std::log(2.0L);
  return static_cast<long double>(i) + gap + correction;
}

}  // namespace

RankDistribution square_rank_distribution(std::size_t n) {
  if (n < 1) throw std::invalid_argument("square_rank_distribution: n must be >= 1");
  RankDistribution dist;
  dist.n = n;
  dist.full.assign(n + 1, 0.0);
  // log2 N(r), starting from N(0) = 1, against log2 of the 2^(n^2) total
  const long double log2_total =
      static_cast<long double>(n) * static_cast<long double>(n);
  long double log2_count = 0.0L;
  dist.full[0] = static_cast<double>(std::exp2(log2_count - log2_total));
  for (std::size_t r = 0; r < n; ++r) {
    // N(r+1)/N(r) = (2^n - 2^r)^2 / (2^r * (2^(r+1) - 1))
    log2_count += 2.0L * log2_pow_diff(n, r) - static_cast<long double>(r) -
                  log2_pow_diff(r + 1, 0);
    dist.full[r + 1] = static_cast<double>(std::exp2(log2_count - log2_total));
  }
  dist.p_full = dist.full[n];
  dist.p_second = dist.full[n - 1];
  long double tail = 0.0L;
  for (std::size_t r = 0; r + 1 < n; ++r) tail += dist.full[r];
  dist.p_tail = static_cast<double>(tail);
  return dist;
}

double rank_probability(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  return square_rank_distribution(n).full[r];
}

std::vector<RankBin> two_bins(std::size_t n) {
  if (n < 2) throw std::invalid_argument("two_bins: n must be >= 2");
  return {{n - 1, n}, {0, n - 2}};
}

std::vector<RankBin> three_bins(std::size_t n) {
  if (n < 2) throw std::invalid_argument("three_bins: n must be >= 2");
  return {{n, n}, {n - 1, n - 1}, {0, n - 2}};
}

std::string bin_label(const RankBin& bin, std::size_t n) {
  std::ostringstream s;
  if (bin.lo == bin.hi)
    s << "rank=" << bin.lo;
  else if (bin.lo == 0)
    s << "rank<=" << bin.hi;
  else if (bin.hi >= n)
    s << "rank>=" << bin.lo;
  else
    s << "rank=" << bin.lo << ".." << bin.hi;
  return s.str();
}

void validate_bins(std::span<const RankBin> bins, std::size_t n) {
  if (bins.empty()) throw std::invalid_argument("bins: empty");
  std::vector<RankBin> sorted(bins.begin(), bins.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RankBin& a, const RankBin& b) { return a.lo < b.lo; });
  std::size_t next = 0;
  for (const RankBin& b : sorted) {
    if (b.lo > b.hi || b.lo != next)
      throw std::invalid_argument("bins: do not partition the rank range");
    next = b.hi + 1;
  }
  if (next != n + 1)
    throw std::invalid_argument("bins: do not cover ranks 0..n");
}

std::vector<double> expected_census(std::uint64_t n_windows, std::span<const RankBin> bins,
                                    std::size_t n) {
  validate_bins(bins, n);
  const RankDistribution dist = square_rank_distribution(n);
  std::vector<double> expected;
  expected.reserve(bins.size());
  for (const RankBin& b : bins) {
    long double p = 0.0L;
    for (std::size_t r = b.lo; r <= b.hi; ++r) p += dist.full[r];
    expected.push_back(static_cast<double>(p) * static_cast<double>(n_windows));
  }
  return expected;
}

std::vector<std::uint64_t> bin_census(const RankCensus& census,
                                      std::span<const RankBin> bins) {
  std::vector<std::uint64_t> out(bins.size(), 0);
  for (const auto& [rank, count] : census.counts) {
    bool placed = false;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (rank >= bins[i].lo && rank <= bins[i].hi) {
        out[i] += count;
        placed = true;
        break;
      }
    }
    if (!placed) {
      std::ostringstream msg;
      msg << "bin_census: rank " << rank << " outside every bin";
      throw std::invalid_argument(msg.str());
    }
  }
  return out;
}

namespace {

// Regularized incomplete gamma Q(a, x), cephes-style: series for the lower
// function when x < a+1, Lentz continued fraction for the upper otherwise.
double gamma_p_series(double a, double x) {
  const double lg = std::lgamma(a);
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - lg);
}

double gamma_q_contfrac(double a, double x) {
  const double lg = std::lgamma(a);
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double chi2_upper_tail(double x, unsigned df) {
  if (x < 0) throw std::invalid_argument("chi2_upper_tail: negative statistic");
  if (df == 0) throw std::invalid_argument("chi2_upper_tail: zero degrees of freedom");
  if (x == 0) return 1.0;
  const double a = 0.5 * df;
  const double half_x = 0.5 * x;
  if (half_x < a + 1.0) return 1.0 - gamma_p_series(a, half_x);
  return gamma_q_contfrac(a, half_x);
}

ChiSquareResult chi_square(std::span<const std::uint64_t> observed,
                           std::span<const double> expected, double threshold) {
  if (observed.size() != expected.size()) {
    std::ostringstream msg;
    msg << "chi_square: " << observed.size() << " observed bins vs " << expected.size()
        << " expected";
    throw std::invalid_argument(msg.str());
  }
  if (observed.size() < 2)
    throw std::invalid_argument("chi_square: need at least two bins");
  ChiSquareResult res;
  res.df = unsigned(observed.size() - 1);
  res.threshold = threshold;
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0))
      throw std::invalid_argument("chi_square: expected counts must be positive");
    const double diff = double(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  res.statistic = stat;
  res.p_value = chi2_upper_tail(stat, res.df);
  res.significant = res.p_value < threshold;
  return res;
}

namespace {

ArmSummary summarize_arm(std::span<const RankCensus> censuses,
                         std::span<const RankBin> bins,
                         std::span<const double> expected, double threshold) {
  RankCensus pooled;
  for (const RankCensus& c : censuses) pooled.merge(c);
  ArmSummary arm;
  arm.windows = pooled.total();
  arm.observed = bin_census(pooled, bins);
  arm.deviation.resize(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i)
    arm.deviation[i] = double(arm.observed[i]) - expected[i];
  arm.chi2 = chi_square(arm.observed, expected, threshold);
  return arm;
}

}  // namespace

VerdictReport verdict(std::span<const RankCensus> aes_censuses,
                      std::span<const RankCensus> random_censuses,
                      std::span<const RankBin> bins, std::size_t n, double threshold) {
  if (aes_censuses.empty() || random_censuses.empty())
    throw std::invalid_argument("verdict: both arms need at least one census");
  validate_bins(bins, n);

  VerdictReport report;
  report.n = n;
  report.bins.assign(bins.begin(), bins.end());
  for (const RankBin& b : bins) report.bin_labels.push_back(bin_label(b, n));
  report.threshold = threshold;

  std::uint64_t aes_total = 0, random_total = 0;
  for (const RankCensus& c : aes_censuses) aes_total += c.total();
  for (const RankCensus& c : random_censuses) random_total += c.total();
  report.expected_aes = expected_census(aes_total, bins, n);
  report.expected_random = expected_census(random_total, bins, n);

  report.aes = summarize_arm(aes_censuses, bins, report.expected_aes, threshold);
  report.random = summarize_arm(random_censuses, bins, report.expected_random, threshold);
  report.ratio = report.aes.chi2.p_value / report.random.chi2.p_value;
  report.distinguished =
      report.aes.chi2.significant && !report.random.chi2.significant;
  return report;
}

}  // namespace aesrank
