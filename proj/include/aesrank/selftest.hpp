#pragma once

#include <string>
#include <vector>

namespace aesrank {

struct SelfTestItem {
  std::string name;
  bool pass = false;
  std::string detail;  // human-readable evidence, filled on pass and fail
};

struct SelfTestResult {
  std::vector<SelfTestItem> items;

  bool all_pass() const {
    for (const SelfTestItem& item : items) {
      if (!item.pass) return false;
    }
    return true;
  }
};

struct SelfTestOptions {
  // Include the end-to-end spot check (one full census window of the
  // chosen-plaintext set); costs a few seconds.
  bool spot_check = true;
  // Fault-injection hook: flips one bit of the checked S-box table so the
  // bijectivity check must fail.  Exists to prove the harness can fail.
  bool corrupt_sbox = false;
};

// Built-in consistency suite: cipher known-answer tests, S-box bijectivity,
// the order of the mixing matrix, rank against a naive eliminator, the
// one-hot embedding, exact rank-count enumeration against the closed-form
// distribution, and (optionally) one spot-checked census window.
SelfTestResult run_selftest(const SelfTestOptions& options = {});

}  // namespace aesrank
