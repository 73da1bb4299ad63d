#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aesrank/bitmatrix.hpp"
#include "aesrank/matrix_io.hpp"
#include "aesrank/pluq.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("aesrank-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the binary with `args`, capturing stdout/stderr and the exit code.
CliResult run_cli(const std::string& args) {
  static int serial = 0;
  const fs::path out = scratch_dir() / ("stdout." + std::to_string(serial));
  const fs::path err = scratch_dir() / ("stderr." + std::to_string(serial));
  ++serial;
  const std::string cmd = std::string("\"") + AESRANK_CLI_PATH + "\" " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("version and usage errors") {
  const CliResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);

  CHECK(run_cli("").exit_code == 2);               // a subcommand is required
  CHECK(run_cli("--no-such-flag").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("census --arm martian").exit_code == 2);
  CHECK(run_cli("distinguish --tau 0").exit_code == 2);
  CHECK(run_cli("distinguish --threshold 0.9").exit_code == 2);
}

TEST_CASE("theory prints the distribution and writes JSON") {
  const CliResult plain = run_cli("theory");
  CHECK(plain.exit_code == 0);
  CHECK(plain.out.find("0.2887881") != std::string::npos);
  CHECK(plain.out.find("0.5775762") != std::string::npos);
  CHECK(plain.out.find("0.1336357") != std::string::npos);
  CHECK(plain.out.find("rank>=31744") != std::string::npos);

  const fs::path out = scratch_dir() / "theory.json";
  const CliResult dumped =
      run_cli("--out " + out.string() + " theory --bins 3 --windows 33792");
  CHECK(dumped.exit_code == 0);
  REQUIRE(fs::exists(out));
  const json j = json::parse(slurp(out));
  CHECK(j.at("n") == 31745);
  CHECK(j.at("windows") == 33792);
  CHECK(j.at("p_tail").get<double>() == doctest::Approx(oracle::kPTail31745));
  REQUIRE(j.at("expected_census").size() == 3);
  CHECK(j.at("expected_census")[0].at("label") == "rank=31745");
  CHECK(j.at("expected_census")[2].at("expected").get<double>() ==
        doctest::Approx(4515.8).epsilon(1e-4));

  const fs::path mpath = fs::path(out.string() + ".manifest.json");
  REQUIRE(fs::exists(mpath));
  const json manifest = json::parse(slurp(mpath));
  CHECK(manifest.at("command") == "theory");
  CHECK(manifest.at("version") == "0.1.0");
  const auto& outputs = manifest.at("outputs");
  REQUIRE(outputs.contains(out.string()));
  const std::string digest = outputs.at(out.string()).get<std::string>();
  CHECK(digest.substr(0, 7) == "sha256:");
  CHECK(digest.size() == 7 + 64);
}

TEST_CASE("selftest passes clean and fails when faulted") {
  const CliResult ok = run_cli("selftest --skip-spot-check");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("PASS") != std::string::npos);
  CHECK(ok.out.find("FAIL") == std::string::npos);

  const CliResult faulted = run_cli("selftest --skip-spot-check --corrupt-sbox");
  CHECK(faulted.exit_code == 1);
  CHECK(faulted.out.find("FAIL") != std::string::npos);
}

TEST_CASE("rank reads the matrix container") {
  using namespace aesrank;
  oracle::SplitMix64 rng(2026);
  const BitMatrix m = oracle::random_matrix(rng, 96, 180);
  const std::size_t expected = gf2_rank(m);
  const fs::path file = scratch_dir() / "matrix.gf2m";
  save_gf2m(m, file);

  const CliResult res = run_cli("rank " + file.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("96 x 180 matrix: rank " + std::to_string(expected)) !=
        std::string::npos);

  const fs::path out = scratch_dir() / "rank.json";
  const CliResult dumped = run_cli("--out " + out.string() + " rank " + file.string());
  CHECK(dumped.exit_code == 0);
  const json j = json::parse(slurp(out));
  CHECK(j.at("rows") == 96);
  CHECK(j.at("cols") == 180);
  CHECK(j.at("rank") == expected);

  CHECK(run_cli("rank " + (scratch_dir() / "missing.gf2m").string()).exit_code == 2);
}

TEST_CASE("census of the chosen set is exact and reproducible") {
  const fs::path first = scratch_dir() / "census1.json";
  const std::string args = "census --arm plain --windows 1 --seed 5 --quiet --out ";
  const CliResult a = run_cli(args + first.string());
  CHECK(a.exit_code == 0);

  const json j = json::parse(slurp(first));
  CHECK(j.at("arm") == "plain");
  CHECK(j.at("seed") == 5);
  CHECK(j.at("rounds") == 0);
  CHECK(j.at("window_starts") == json::array({1}));
  CHECK(j.at("counts") == json{{"4690", 1}});

  REQUIRE(fs::exists(first.string() + ".manifest.json"));
  const json manifest = json::parse(slurp(first.string() + ".manifest.json"));
  CHECK(manifest.at("command") == "census");
  CHECK(manifest.at("config").at("windows") == 1);

  // identical invocation, byte-identical data file
  const fs::path second = scratch_dir() / "census2.json";
  const CliResult b = run_cli(args + second.string());
  CHECK(b.exit_code == 0);
  CHECK(slurp(first) == slurp(second));
  CHECK(!slurp(first).empty());
}

TEST_CASE("census emits CSV on stdout when no output file is given") {
  const CliResult res = run_cli("census --arm plain --windows 1 --format csv --quiet");
  CHECK(res.exit_code == 0);
  CHECK(res.out ==
        "arm,key_index,rank,count\n"
        "plain,0,4690,1\n");
}

TEST_CASE("desk-scale ceiling requires explicit acknowledgement") {
  // 33792 windows (census) and 2*9*512 = 9216 windows (distinguish) both
  // exceed the 8192-window ceiling; the refusals are instant.
  const CliResult census = run_cli("census --arm plain --windows 0");
  CHECK(census.exit_code == 2);
  CHECK(census.err.find("--i-know-this-costs-2pow48") != std::string::npos);

  const CliResult dist = run_cli("distinguish --tau 9 --windows 512");
  CHECK(dist.exit_code == 2);
  CHECK(dist.err.find("--i-know-this-costs-2pow48") != std::string::npos);

  // at the ceiling no acknowledgement is needed, and bad block widths are
  // still caught early by the argument checks
  CHECK(run_cli("census --arm plain --windows 40000").exit_code == 2);
}

TEST_CASE("distinguish writes the report bundle") {
  const fs::path prefix = scratch_dir() / "tiny";
  const CliResult res = run_cli("distinguish --tau 1 --rounds 1 --windows 1 --seed 7 "
                                "--quiet --out " +
                                prefix.string());
  // a one-window run is either verdict, but deterministically so
  CHECK((res.exit_code == 0 || res.exit_code == 1));
  CHECK(res.out.find("verdict:") != std::string::npos);

  const json report = json::parse(slurp(prefix.string() + ".report.json"));
  CHECK(report.at("n") == 31745);
  const bool distinguished = report.at("verdict") == "distinguished";
  CHECK(res.exit_code == (distinguished ? 0 : 1));
  CHECK(report.at("aes").at("windows") == 1);
  CHECK(report.at("random").at("windows") == 1);

  const json censuses = json::parse(slurp(prefix.string() + ".censuses.json"));
  REQUIRE(censuses.size() == 2);
  CHECK(censuses[0].at("arm") == "aes");
  CHECK(censuses[0].at("rounds") == 1);
  CHECK(censuses[1].at("arm") == "random");

  const std::string plot = slurp(prefix.string() + ".plot.csv");
  CHECK(plot.substr(0, 45) == "arm,sample_order,low_rank_count,expected_low_");

  const json manifest = json::parse(slurp(prefix.string() + ".manifest.json"));
  CHECK(manifest.at("outputs").size() == 3);
  CHECK(manifest.at("config").at("tau") == 1);
}

TEST_CASE("config files provide defaults that flags override") {
  const fs::path cfg = scratch_dir() / "defaults.conf";
  std::ofstream(cfg) << "seed=99\n";

  const fs::path from_cfg = scratch_dir() / "cfg1.json";
  const CliResult a = run_cli("--config " + cfg.string() +
                              " census --arm plain --windows 1 --quiet --out " +
                              from_cfg.string());
  CHECK(a.exit_code == 0);
  CHECK(json::parse(slurp(from_cfg)).at("seed") == 99);

  const fs::path overridden = scratch_dir() / "cfg2.json";
  const CliResult b = run_cli("--config " + cfg.string() +
                              " census --arm plain --windows 1 --seed 5 --quiet --out " +
                              overridden.string());
  CHECK(b.exit_code == 0);
  CHECK(json::parse(slurp(overridden)).at("seed") == 5);
}
