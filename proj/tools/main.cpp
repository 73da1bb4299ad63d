// aesrank -- command-line front end for the rank-census experiments.
//
// Subcommands:
//   theory       closed-form rank distribution and expected census counts
//   census       rank census of one ordered set (chosen, encrypted or random)
//   distinguish  the full two-arm experiment with chi-square verdict
//   rank         rank of a matrix stored in the GF2M container
//   selftest     built-in consistency suite
//
// Exit codes: 0 success, 1 test/verdict failure or runtime error, 2 usage.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "aesrank/aes.hpp"
#include "aesrank/distinguisher.hpp"
#include "aesrank/matrix_io.hpp"
#include "aesrank/pluq.hpp"
#include "aesrank/selftest.hpp"
#include "aesrank/serialize.hpp"
#include "aesrank/stats.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Desk-scale ceiling: runs ranking more windows than this must be
// acknowledged explicitly, because the full experiment is enormous.
constexpr std::uint64_t kDeskScaleWindows = 8192;

using aesrank::RankBin;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(2 * len);
  static const char* kDigits = "0123456789abcdef";
  for (unsigned i = 0; i < len; ++i) {
    hex.push_back(kDigits[digest[i] >> 4]);
    hex.push_back(kDigits[digest[i] & 0xf]);
  }
  return hex;
}

// Collects everything the run manifest records; data files stay fully
// deterministic while timings and digests live here.
class RunManifest {
public:
  RunManifest(std::string command, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)),
        start_(std::chrono::steady_clock::now()) {}

  void set(const std::string& key, const nlohmann::ordered_json& value) {
    config_[key] = value;
  }

  void write_output(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open output file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("failed to write output file: " + path.string());
    }
    outputs_[path.string()] = "sha256:" + sha256_hex(content);
  }

  void save(const std::filesystem::path& path) const {
    using clock = std::chrono::steady_clock;
    const auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start_);
    nlohmann::ordered_json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["invocation"] = argv_;
    m["config"] = config_;
    m["wall_ms"] = wall.count();
    nlohmann::ordered_json outs = nlohmann::ordered_json::object();
    for (const auto& [file, digest] : outputs_) outs[file] = digest;
    m["outputs"] = outs;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open manifest file: " + path.string());
    }
    out << m.dump(2) << '\n';
  }

private:
  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::map<std::string, std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

// Prints coarse progress to stderr (at most ~100 lines per run).
std::function<void(std::size_t, std::size_t)> progress_printer(bool quiet) {
  if (quiet) return {};
  return [](std::size_t done, std::size_t total) {
    const std::size_t step = total < 100 ? 1 : total / 100;
    if (done % step == 0 || done == total) {
      std::fprintf(stderr, "  ranked %zu/%zu windows\n", done, total);
    }
  };
}

std::vector<RankBin> bins_for(unsigned bin_count, std::size_t n) {
  return bin_count == 3 ? aesrank::three_bins(n) : aesrank::two_bins(n);
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  bool quiet = false;
};

void run_theory(const GlobalOptions& g, std::size_t n, std::uint64_t windows,
                unsigned bin_count, const std::vector<std::string>& argv) {
  const aesrank::RankDistribution dist = aesrank::square_rank_distribution(n);
  const std::vector<RankBin> bins = bins_for(bin_count, n);
  const std::vector<double> expected = aesrank::expected_census(windows, bins, n);

  std::printf("rank distribution of a uniform %zux%zu matrix over GF(2)\n", n, n);
  std::printf("  P(rank = n)    = %.7f\n", dist.p_full);
  std::printf("  P(rank = n-1)  = %.7f\n", dist.p_second);
  std::printf("  P(rank <= n-2) = %.7f\n", dist.p_tail);
  std::printf("expected census over %llu windows:\n",
              static_cast<unsigned long long>(windows));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    std::printf("  %-14s %12.2f\n", aesrank::bin_label(bins[i], n).c_str(), expected[i]);
  }

  if (!g.out.empty()) {
    RunManifest manifest("theory", argv);
    manifest.set("n", n);
    manifest.set("windows", windows);
    manifest.set("bins", bin_count);
    nlohmann::ordered_json j;
    j["n"] = n;
    j["p_full"] = dist.p_full;
    j["p_second"] = dist.p_second;
    j["p_tail"] = dist.p_tail;
    j["windows"] = windows;
    nlohmann::ordered_json jb = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < bins.size(); ++i) {
      nlohmann::ordered_json e;
      e["label"] = aesrank::bin_label(bins[i], n);
      e["lo"] = bins[i].lo;
      e["hi"] = bins[i].hi;
      e["expected"] = expected[i];
      jb.push_back(e);
    }
    j["expected_census"] = jb;
    manifest.write_output(g.out, j.dump(2) + "\n");
    manifest.save(g.out + ".manifest.json");
  }
}

aesrank::CensusRecord make_census(const GlobalOptions& g, const std::string& arm,
                                  unsigned rounds, std::size_t key_bytes,
                                  std::uint32_t key_index, std::uint32_t windows,
                                  const std::string& pair_order, std::size_t block_cols) {
  using namespace aesrank;
  const PairOrder order =
      pair_order == "16" ? PairOrder::kByte16Dominant : PairOrder::kByte15Dominant;
  const std::vector<std::uint32_t> starts =
      windows == 0 ? all_window_starts() : evenly_spaced_starts(windows);

  OrderedSet set = build_sbar(order);
  unsigned recorded_rounds = 0;
  if (arm == "aes") {
    const CtrPrng prng(g.seed);
    std::vector<std::uint8_t> kb(key_bytes);
    prng.fill(prng_domain::kExperimentKeys, std::uint64_t{key_index} * 4, kb);
    const CipherKey key = CipherKey::schedule(kb);
    set = encrypt_set(set, key, RoundSpec::reduced(rounds));
    recorded_rounds = rounds;
  } else if (arm == "random") {
    set = random_sample_set(CtrPrng(g.seed), key_index);
  }

  const auto progress = progress_printer(g.quiet);
  std::size_t done = 0;
  const std::function<void()> tick = [&] {
    ++done;
    if (progress) progress(done, starts.size());
  };
  RankCensus census = algorithm_b(set, starts, block_cols, g.threads, tick);
  return CensusRecord{arm, key_index, g.seed, recorded_rounds, starts, std::move(census)};
}

void run_census(const GlobalOptions& g, const std::string& arm, unsigned rounds,
                std::size_t key_bytes, std::uint32_t key_index, std::uint32_t windows,
                const std::string& format, const std::string& pair_order,
                std::size_t block_cols, bool acknowledged,
                const std::vector<std::string>& argv) {
  const std::uint64_t total = windows == 0 ? aesrank::kNumWindows : windows;
  if (total > kDeskScaleWindows && !acknowledged) {
    throw CLI::ValidationError(
        "census",
        "ranking " + std::to_string(total) +
            " windows exceeds the desk-scale ceiling; pass --i-know-this-costs-2pow48 "
            "to acknowledge the cost");
  }

  RunManifest manifest("census", argv);
  const aesrank::CensusRecord record =
      make_census(g, arm, rounds, key_bytes, key_index, windows, pair_order, block_cols);

  const std::string payload = format == "csv"
                                  ? aesrank::censuses_to_csv({&record, 1})
                                  : aesrank::census_to_json(record);
  if (g.out.empty()) {
    std::fputs(payload.c_str(), stdout);
    return;
  }
  manifest.set("arm", arm);
  manifest.set("rounds", record.rounds);
  manifest.set("key_bytes", key_bytes);
  manifest.set("key_index", key_index);
  manifest.set("windows", record.window_starts.size());
  manifest.set("seed", g.seed);
  manifest.set("threads", g.threads);
  manifest.set("format", format);
  manifest.set("pair_order", pair_order);
  manifest.set("block_cols", block_cols);
  manifest.write_output(g.out, payload);
  manifest.save(g.out + ".manifest.json");
}

int run_distinguish(const GlobalOptions& g, std::uint32_t tau, unsigned rounds,
                    std::size_t key_bytes, std::uint32_t windows, unsigned bin_count,
                    double threshold, const std::string& pair_order, std::size_t block_cols,
                    bool acknowledged, const std::vector<std::string>& argv) {
  using namespace aesrank;
  const std::uint64_t per_set = windows == 0 ? kNumWindows : windows;
  const std::uint64_t total = 2 * std::uint64_t{tau} * per_set;
  if (total > kDeskScaleWindows && !acknowledged) {
    throw CLI::ValidationError(
        "distinguish",
        "ranking " + std::to_string(total) +
            " windows exceeds the desk-scale ceiling; pass --i-know-this-costs-2pow48 "
            "to acknowledge the cost");
  }

  RunManifest manifest("distinguish", argv);
  ExperimentConfig cfg;
  cfg.tau = tau;
  cfg.rounds = rounds;
  cfg.key_bytes = key_bytes;
  cfg.seed = g.seed;
  if (windows != 0) cfg.windows_per_set = windows;
  cfg.pair_order = pair_order == "16" ? PairOrder::kByte16Dominant : PairOrder::kByte15Dominant;
  cfg.block_cols = block_cols;
  cfg.threads = g.threads;
  cfg.progress = progress_printer(g.quiet);

  const ExperimentResult result = run_experiment(cfg);

  std::vector<CensusRecord> records;
  for (std::uint32_t i = 0; i < tau; ++i) {
    records.push_back({"aes", i, g.seed, rounds, result.window_starts, result.aes[i]});
  }
  for (std::uint32_t i = 0; i < tau; ++i) {
    records.push_back({"random", i, g.seed, 0, result.window_starts, result.random[i]});
  }

  const std::vector<RankBin> bins = bins_for(bin_count, kWindowRows);
  const VerdictReport report =
      verdict(result.aes, result.random, bins, kWindowRows, threshold);

  std::printf("verdict: %s\n", report.distinguished ? "distinguished" : "not-distinguished");
  std::printf("  aes arm:    chi2 = %.4f, p = %.6g over %llu windows\n",
              report.aes.chi2.statistic, report.aes.chi2.p_value,
              static_cast<unsigned long long>(report.aes.windows));
  std::printf("  random arm: chi2 = %.4f, p = %.6g over %llu windows\n",
              report.random.chi2.statistic, report.random.chi2.p_value,
              static_cast<unsigned long long>(report.random.windows));
  std::printf("  p-ratio aes/random = %.6g\n", report.ratio);

  manifest.set("tau", tau);
  manifest.set("rounds", rounds);
  manifest.set("key_bytes", key_bytes);
  manifest.set("windows_per_set", per_set);
  manifest.set("bins", bin_count);
  manifest.set("threshold", threshold);
  manifest.set("seed", g.seed);
  manifest.set("threads", g.threads);
  manifest.set("pair_order", pair_order);
  manifest.set("block_cols", block_cols);

  const std::string prefix = g.out.empty() ? std::string("distinguish") : g.out;
  manifest.write_output(prefix + ".report.json", report_to_json(report));
  manifest.write_output(prefix + ".censuses.json", censuses_to_json(records));
  manifest.write_output(prefix + ".plot.csv", plot_csv(records, kWindowRows));
  manifest.save(prefix + ".manifest.json");
  std::printf("wrote %s.report.json, %s.censuses.json, %s.plot.csv\n", prefix.c_str(),
              prefix.c_str(), prefix.c_str());

  return report.distinguished ? 0 : 1;
}

void run_rank(const GlobalOptions& g, const std::string& file, std::size_t block_cols,
              const std::vector<std::string>& argv) {
  const aesrank::BitMatrix m = aesrank::load_gf2m(std::filesystem::path(file));
  const std::size_t r = aesrank::gf2_rank(m, block_cols);
  std::printf("%zu x %zu matrix: rank %zu\n", m.rows(), m.cols(), r);
  if (!g.out.empty()) {
    RunManifest manifest("rank", argv);
    manifest.set("input", file);
    manifest.set("block_cols", block_cols);
    nlohmann::ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["rank"] = r;
    manifest.write_output(g.out, j.dump(2) + "\n");
    manifest.save(g.out + ".manifest.json");
  }
}

int run_selftest_cmd(bool skip_spot_check, bool corrupt_sbox) {
  aesrank::SelfTestOptions options;
  options.spot_check = !skip_spot_check;
  options.corrupt_sbox = corrupt_sbox;
  const aesrank::SelfTestResult result = aesrank::run_selftest(options);
  for (const aesrank::SelfTestItem& item : result.items) {
    std::printf("%-28s %s  (%s)\n", item.name.c_str(), item.pass ? "PASS" : "FAIL",
                item.detail.c_str());
  }
  return result.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> argv_copy(argv, argv + argc);

  CLI::App app{"rank-census distinguishing experiments on reduced-round AES"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "read defaults from a key=value config file");
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "64-bit experiment seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for window ranking")
      ->check(CLI::Range(1u, 64u))
      ->capture_default_str();
  app.add_option("--out", g.out, "output file (census, rank, theory) or prefix (distinguish)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  int exit_code = 0;

  // theory ------------------------------------------------------------
  auto* theory = app.add_subcommand("theory", "closed-form rank distribution");
  std::size_t theory_n = aesrank::kWindowRows;
  std::uint64_t theory_windows = aesrank::kNumWindows;
  unsigned theory_bins = 2;
  theory->add_option("--n", theory_n, "matrix dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  theory->add_option("--windows", theory_windows, "number of census windows")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  theory->add_option("--bins", theory_bins, "census bins (2 or 3)")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  theory->callback([&] { run_theory(g, theory_n, theory_windows, theory_bins, argv_copy); });

  // census ------------------------------------------------------------
  auto* census = app.add_subcommand("census", "rank census of one ordered set");
  std::string census_arm = "aes";
  unsigned census_rounds = 10;
  std::size_t census_key_bytes = 16;
  std::uint32_t census_key_index = 0;
  std::uint32_t census_windows = 512;
  std::string census_format = "json";
  std::string census_pair_order = "15";
  std::size_t census_block_cols = aesrank::kDefaultBlockCols;
  bool census_ack = false;
  census->add_option("--arm", census_arm, "plain, aes or random")
      ->check(CLI::IsMember({"plain", "aes", "random"}))
      ->capture_default_str();
  census->add_option("--rounds", census_rounds, "rounds after whitening (aes arm)")
      ->capture_default_str();
  census->add_option("--key-bytes", census_key_bytes, "cipher key size in bytes")
      ->check(CLI::IsMember({16, 24, 32}))
      ->capture_default_str();
  census->add_option("--key-index", census_key_index, "trial index (key or baseline set)")
      ->capture_default_str();
  census
      ->add_option("--windows", census_windows,
                   "windows per census, evenly spaced (0 = all 33792)")
      ->check(CLI::Range(std::uint32_t{0}, std::uint32_t{aesrank::kNumWindows}))
      ->capture_default_str();
  census->add_option("--format", census_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  census->add_option("--pair-order", census_pair_order,
                     "dominant free plaintext byte, 15 (default) or 16")
      ->check(CLI::IsMember({"15", "16"}))
      ->capture_default_str();
  census->add_option("--block-cols", census_block_cols, "elimination blocking width")
      ->group("Advanced")
      ->capture_default_str();
  census->add_flag("--i-know-this-costs-2pow48", census_ack,
                   "acknowledge a beyond-desk-scale run");
  census->callback([&] {
    run_census(g, census_arm, census_rounds, census_key_bytes, census_key_index,
               census_windows, census_format, census_pair_order, census_block_cols,
               census_ack, argv_copy);
  });

  // distinguish ---------------------------------------------------------
  auto* dist = app.add_subcommand("distinguish", "two-arm experiment with verdict");
  std::uint32_t dist_tau = 2;
  unsigned dist_rounds = 10;
  std::size_t dist_key_bytes = 16;
  std::uint32_t dist_windows = 512;
  unsigned dist_bins = 2;
  double dist_threshold = aesrank::kDefaultThreshold;
  std::string dist_pair_order = "15";
  std::size_t dist_block_cols = aesrank::kDefaultBlockCols;
  bool dist_ack = false;
  dist->add_option("--tau", dist_tau, "keys / baseline sets per arm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  dist->add_option("--rounds", dist_rounds, "rounds after whitening for the cipher arm")
      ->capture_default_str();
  dist->add_option("--key-bytes", dist_key_bytes, "cipher key size in bytes")
      ->check(CLI::IsMember({16, 24, 32}))
      ->capture_default_str();
  dist
      ->add_option("--windows", dist_windows,
                   "windows per census, evenly spaced (0 = all 33792)")
      ->check(CLI::Range(std::uint32_t{0}, std::uint32_t{aesrank::kNumWindows}))
      ->capture_default_str();
  dist->add_option("--bins", dist_bins, "census bins (2 or 3)")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  dist->add_option("--threshold", dist_threshold, "significance threshold")
      ->check(CLI::Range(1e-12, 0.5))
      ->capture_default_str();
  dist->add_option("--pair-order", dist_pair_order,
                   "dominant free plaintext byte, 15 (default) or 16")
      ->check(CLI::IsMember({"15", "16"}))
      ->capture_default_str();
  dist->add_option("--block-cols", dist_block_cols, "elimination blocking width")
      ->group("Advanced")
      ->capture_default_str();
  dist->add_flag("--i-know-this-costs-2pow48", dist_ack,
                 "acknowledge a beyond-desk-scale run");
  dist->callback([&] {
    exit_code = run_distinguish(g, dist_tau, dist_rounds, dist_key_bytes, dist_windows,
                                dist_bins, dist_threshold, dist_pair_order, dist_block_cols,
                                dist_ack, argv_copy);
  });

  // rank ----------------------------------------------------------------
  auto* rank = app.add_subcommand("rank", "rank of a GF2M matrix file");
  std::string rank_file;
  std::size_t rank_block_cols = aesrank::kDefaultBlockCols;
  rank->add_option("file", rank_file, "matrix in GF2M format")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--block-cols", rank_block_cols, "elimination blocking width")
      ->group("Advanced")
      ->capture_default_str();
  rank->callback([&] { run_rank(g, rank_file, rank_block_cols, argv_copy); });

  // selftest --------------------------------------------------------------
  auto* selftest = app.add_subcommand("selftest", "built-in consistency suite");
  bool st_skip_spot = false;
  bool st_corrupt = false;
  selftest->add_flag("--skip-spot-check", st_skip_spot,
                     "skip the multi-second census window check");
  selftest->add_flag("--corrupt-sbox", st_corrupt,
                     "inject an S-box fault (the suite must then fail)");
  selftest->callback([&] { exit_code = run_selftest_cmd(st_skip_spot, st_corrupt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
