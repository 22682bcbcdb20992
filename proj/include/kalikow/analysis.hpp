#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kalikow/encoder.hpp"

namespace kalikow {

// Tail closure profile of an infinite sequence: the indices whose entries
// escape the closure of everything after them. `violated` flags an infinite
// escape pattern (the algebra fails the tail-closure property on this
// sequence); then witnesses carries a sample of escaping indices instead.
struct TailReport {
  bool violated = false;
  std::vector<std::uint64_t> u_inf;
  std::uint64_t n_star = 0;  // 1 + max(u_inf)
  std::vector<std::uint64_t> witnesses;

  nlohmann::json to_json() const;
};

TailReport tail_u(const Algebra& alg, const SequenceSpec& spec);

// Least bound past which every index below n0 (outside the tail u-set) has
// both its closure window and its witness term index inside the prefix:
// max of f + g + 2 over those indices.
std::uint64_t threshold_n1(const Algebra& alg, const SequenceSpec& spec,
                           std::uint64_t n0);

// Stabilization thresholds for an almost-equal pair: n0 past all
// disagreements and both tail u-sets, then three rounds of the f+g+2
// recursion over both members.
struct ThresholdReport {
  std::uint64_t n_star = 0;
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t n3 = 0;
  std::vector<std::uint64_t> chain;  // decode chains reuse this slot

  nlohmann::json to_json() const;
};

ThresholdReport thresholds_pair(const Algebra& alg, const PairSpec& pair);

struct PropertyReport {
  std::string claim;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::uint64_t checks = 0;
  nlohmann::json thresholds = nlohmann::json::object();
  std::vector<std::string> counterexamples;

  bool pass() const { return counterexamples.empty(); }
  void note_failure(std::string what);

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Divergence of the cut point statistics along one sequence: for each grid
// value n0, k1 and l exceed n0 from the n1 threshold on, the k0 dichotomy
// holds with at least one max-u witness, and m and k exceed n0 beyond the
// composed thresholds. Throws ConfigError when the horizon cannot reach the
// computed thresholds.
PropertyReport check_cl4(const Algebra& alg, const SequenceSpec& spec,
                         const std::vector<std::uint64_t>& grid, std::uint64_t horizon);

// Agreement of l, m, k between the members of an almost-equal pair for all
// prefix lengths in [n3, horizon].
PropertyReport check_cl5(const Algebra& alg, const PairSpec& pair, std::uint64_t horizon);

// Agreement of the encoded values between the members of an almost-equal
// pair for all lengths in [m1, horizon], m1 composed per the cut point
// divergence argument.
PropertyReport check_cl7(const Algebra& alg, const PairSpec& pair, std::uint64_t horizon);

// Contrapositive streak check for a divergent pair: every window of the
// given width inside [start, horizon] contains a length where the encoded
// values differ. window 0 picks 4x the combined cycle length.
PropertyReport check_cl8(const Algebra& alg, const PairSpec& pair, std::uint64_t start,
                         std::uint64_t window, std::uint64_t horizon);

struct Star0Report {
  enum class Verdict { holds, violated, truncated_holds };
  Verdict verdict = Verdict::holds;
  std::vector<std::uint64_t> u_inf;
  std::uint64_t n_star = 0;
  std::vector<std::uint64_t> witnesses;        // violation indices
  std::vector<std::uint64_t> unknown_indices;  // bounded-closure caveats

  bool ok() const { return verdict != Verdict::violated; }
  nlohmann::json to_json() const;
};

// Exact-closure algebras delegate to tail_u; bounded ones check truncated
// tails up to the horizon and never report a violation (membership search is
// a semi-decision there).
Star0Report star0_check(const Algebra& alg, const SequenceSpec& spec,
                        std::uint64_t horizon);

// Descent heuristics: drop_max removes the top of the current closure
// (predecessor) or the largest generator (successor); shift_up bumps every
// generator through the successor map.
enum class DescentRule { drop_max, shift_up };

struct Star1Report {
  bool descended = false;      // survived all steps strictly shrinking
  std::uint64_t steps = 0;     // steps requested
  std::uint64_t stabilized_at = 0;  // meaningful when !descended

  nlohmann::json to_json() const;
};

Star1Report star1_descent(const Algebra& alg, const std::vector<Ordinal>& start_gens,
                          std::uint64_t steps, DescentRule rule = DescentRule::drop_max);

struct Star2Report {
  bool holds = false;
  std::string reason;

  nlohmann::json to_json() const;
};

// Picks the infinite tail subset carrying the cycle maximum and argues
// symbolically that every infinite subset of it has the same closure.
// Predecessor algebra with eventually periodic specs only.
Star2Report star2_probe(const Algebra& alg, const SequenceSpec& spec,
                        std::uint64_t cofinite_cut);

// Replays the decoding argument: locate an anchor length past nprime whose m
// statistic clears nprime and whose k0 sits at the tail u-maximum, descend
// the m chain, then recover the target entry's bit fingerprint using only
// the encoded values along the chain.
struct RecoveryReport {
  enum class Status {
    recovered,
    mismatched,
    not_recoverable_by_chain,
    no_chain_anchor,
  };
  struct Step {
    std::uint64_t level = 0;   // chain position whose value supplied the witness
    std::uint32_t arity = 0;
    std::uint64_t exponent = 0;
    std::uint32_t var = 0;
    std::uint64_t from = 0;
    std::uint64_t to = 0;
  };

  Status status = Status::no_chain_anchor;
  std::uint64_t target = 0;
  std::uint64_t n_second = 0;
  std::vector<std::uint64_t> chain;
  std::vector<Step> steps;
  std::uint64_t total_exponent = 0;
  Bits recovered{};
  Bits truth{};

  bool matched() const { return status == Status::recovered; }
  nlohmann::json to_json() const;
};

RecoveryReport decode_replay(const Algebra& alg, const SequenceSpec& spec,
                             std::uint64_t target, std::uint64_t nprime,
                             std::uint64_t search_limit = 128);

}  // namespace kalikow
