#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kalikow/analysis.hpp"

namespace kalikow {

// Seeded batch runners for the claim properties. Each case derives its own
// sub-seed from (seed, index), so cases are independent and the parallel and
// serial paths produce identical reports.
struct SuiteOptions {
  std::uint64_t seed = 1;
  std::uint64_t cases = 0;    // 0 picks the suite default
  std::uint64_t horizon = 0;  // 0 picks the suite default
  bool parallel = false;
};

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::vector<PropertyReport> reports;

  bool pass() const;
  std::uint64_t failures() const;
  nlohmann::json to_json() const;
  std::string csv() const;
};

SuiteResult run_cl4_suite(const Algebra& alg, const SuiteOptions& opt);
SuiteResult run_cl5_suite(const Algebra& alg, const SuiteOptions& opt);
// Also cross-checks integer-code injectivity over every encoded value the
// run produced (hash scan with full recomparison of colliding buckets); the
// verdict rides along as an extra "code-injectivity" report.
SuiteResult run_cl7_suite(const Algebra& alg, const SuiteOptions& opt);
SuiteResult run_cl8_suite(const Algebra& alg, const SuiteOptions& opt);
SuiteResult run_replay_suite(const Algebra& alg, const SuiteOptions& opt);
SuiteResult run_monotone_suite(const Algebra& alg, const SuiteOptions& opt);

// The generators behind the suites. Values stay inside a narrow window above
// a random base so the stabilization thresholds fit the suite horizons.
SequenceSpec random_ep_spec(Rng& rng);
PairSpec random_almost_equal_pair(Rng& rng);
PairSpec random_divergent_pair(Rng& rng);

// The sub-seed for case `index` of a suite seeded with `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace kalikow
