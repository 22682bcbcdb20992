#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kalikow/ordinal.hpp"

namespace kalikow {

// A finitely-described infinite sequence over the carrier: either eventually
// periodic (head then repeating cycle) or a ramp n -> slope*n + offset, with
// a finite edit map applied on top.
struct SequenceSpec {
  enum class Kind { eventually_periodic, ramp };

  Kind kind = Kind::eventually_periodic;
  std::vector<Ordinal> head;   // eventually-periodic only
  std::vector<Ordinal> cycle;  // eventually-periodic only, nonempty
  std::uint64_t slope = 0;     // ramp only
  std::uint64_t offset = 0;    // ramp only
  std::map<std::uint64_t, Ordinal> edits;

  static SequenceSpec eventually_periodic(std::vector<Ordinal> head,
                                          std::vector<Ordinal> cycle);
  static SequenceSpec ramp(std::uint64_t slope, std::uint64_t offset);

  Ordinal entry(std::uint64_t n) const;
  std::vector<Ordinal> prefix(std::uint64_t n) const;
  SequenceSpec perturbed(const std::map<std::uint64_t, Ordinal>& more_edits) const;

  // First index from which the finite description (head + edits) no longer
  // interferes: entries at indices >= this come straight off the cycle/ramp.
  std::uint64_t settled_index() const;
  std::uint64_t cycle_length() const;  // 1 for ramps

  bool operator==(const SequenceSpec&) const = default;

  // "ep:9;5,6", "ep:;5", "ramp:1,0", optional edits segment "ep:9;5,6;2=9,4=1".
  std::string to_string() const;
  static SequenceSpec parse(const std::string& text);

  nlohmann::json to_json() const;
  static SequenceSpec from_json(const nlohmann::json& j);
};

enum class PairRelation { almost_equal, divergent };

// Classify a pair structurally: almost-equal means the sequences agree at all
// but finitely many indices, divergent means they disagree at infinitely
// many. This is a certificate computed from the descriptions (cycle alignment
// over the lcm, ramp parameter comparison), never from sampling.
PairRelation certify_relation(const SequenceSpec& a, const SequenceSpec& b);

// A pair of sequences with its declared relation, validated on construction.
struct PairSpec {
  SequenceSpec left, right;
  PairRelation relation = PairRelation::almost_equal;

  // Throws ConfigError if the declared relation disagrees with the
  // structural certificate.
  static PairSpec make(SequenceSpec left, SequenceSpec right, PairRelation declared);
  static PairSpec certified(SequenceSpec left, SequenceSpec right);

  // lcm of the two cycle lengths; drives the cl8 window default.
  std::uint64_t combined_cycle_length() const;
  // For an almost-equal pair: an index from which on the members provably
  // agree (all edits and heads lie below it).
  std::uint64_t agreement_index() const;

  // "ep:9;5,6|ep:9;5,6;2=9"
  std::string to_string() const;
  static PairSpec parse(const std::string& text);
  nlohmann::json to_json() const;
  static PairSpec from_json(const nlohmann::json& j);
};

}  // namespace kalikow
