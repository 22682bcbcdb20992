#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kalikow/algebra.hpp"
#include "kalikow/hf.hpp"
#include "kalikow/sequence.hpp"

namespace kalikow {

using Prefix = std::vector<Ordinal>;

// Prefix statistics. k0 < k1 < n always; k < m <= l <= k1; k = -1 iff m <= 1.
struct CutPoints {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
  std::uint64_t l = 0;
  std::uint64_t m = 0;
  std::int64_t k = -1;

  bool operator==(const CutPoints&) const = default;
};

constexpr std::uint64_t kDefaultPoolBudget = 2'000'000;
constexpr std::uint64_t kDefaultTermSearchBudget = 1'000'000;

// Per-sequence cache of the window statistics. f and g for an index are
// prefix-independent (f is the least window end whose closure captures the
// entry), so they are computed once; u-sets and cut points for any prefix
// length then come cheap. Entries are materialized lazily from a SequenceSpec
// or fixed up front from a Prefix.
class Session {
 public:
  Session(const Algebra& alg, Prefix entries);
  Session(const Algebra& alg, SequenceSpec spec);

  const Algebra& algebra() const { return *alg_; }
  // Largest usable prefix length (UINT64_MAX when backed by a spec).
  std::uint64_t limit() const;

  const Ordinal& entry(std::uint64_t i);
  Prefix prefix(std::uint64_t n);

  // Is l in u of the length-n prefix? (l = 0 and l = n-1 always are.)
  bool in_u(std::uint64_t l, std::uint64_t n);
  std::vector<std::uint64_t> u(std::uint64_t n);

  // Does alpha_l have a closure witness in some window ending at <= bound?
  bool f_within(std::uint64_t l, std::uint64_t bound);

  // (f_l, g_l): least window end j with alpha_l in cl(entries (l, j)), and
  // the least term index of arity f-l-1 evaluating that window to alpha_l.
  // search_bound limits the f search; throws ConfigError if l turns out to
  // have no witness within it (i.e. l is in u of every prefix that short).
  std::pair<std::uint64_t, std::uint64_t> fg(std::uint64_t l, std::uint64_t search_bound);

  std::pair<std::uint64_t, std::uint64_t> cutpoints(std::uint64_t n);  // (k0, k1)
  CutPoints lmk(std::uint64_t n);

 private:
  void materialize(std::uint64_t n);
  // Extends the f search for index l up to bound; returns whether found.
  bool find_f(std::uint64_t l, std::uint64_t bound);

  const Algebra* alg_;
  std::optional<SequenceSpec> spec_;
  Prefix entries_;

  struct FgSlot {
    std::uint64_t f = 0;
    std::uint64_t g = 0;
    bool f_found = false;
    bool g_done = false;
    std::uint64_t searched_to = 0;  // f not found for any window end <= this
  };
  std::vector<FgSlot> fg_;
  std::map<std::uint64_t, CutPoints> lmk_cache_;
};

// Stateless forms of the prefix statistics.
std::vector<std::uint64_t> compute_u(const Algebra& alg, const Prefix& pre);
std::pair<std::uint64_t, std::uint64_t> compute_fg(const Algebra& alg, const Prefix& pre,
                                                   std::uint64_t l);
std::pair<std::uint64_t, std::uint64_t> compute_cutpoints(const Algebra& alg,
                                                          const Prefix& pre);
CutPoints compute_lmk(const Algebra& alg, const Prefix& pre);

// The term pool T(n1, n2): all terms of arity n <= n2-n1 whose enumeration
// index is <= n2 (the base terms), plus compositions of depth <= n2 of base
// terms. Canonicalized and returned as (arity, index) pairs in ascending
// order. Throws BudgetError instead of truncating.
struct PoolEntry {
  std::uint32_t arity = 0;
  std::uint64_t index = 0;
  auto operator<=>(const PoolEntry&) const = default;
};
std::vector<PoolEntry> term_pool(const Algebra& alg, std::uint64_t n1, std::uint64_t n2,
                                 std::uint64_t budget = kDefaultPoolBudget);
// For single-unary-operation signatures the pool at arity n is exactly
// {op^d(x_j) : j < n, d <= pool_exponent_bound(n, j, n2)}.
std::uint64_t pool_exponent_bound(std::uint32_t arity, std::uint32_t var,
                                  std::uint64_t n2);

// Least-significant-bit-first binary expansion of the element's ordinal code,
// zero padded / truncated to len.
Bits eta_prefix(const Algebra& alg, const Ordinal& e, std::uint32_t len);

// A run of consecutive exponents d whose application rows carry identical
// content: the eta fingerprint of the evaluated value, the bitmask of low
// indices i (bit t for i = max(0,n0)+t) whose entry equals the value, and
// the value's equivalence class (expanded index of the first row with an
// equal value; kNoClass when no strictly increasing argument tuple can place
// this row's window index at this term's variable position).
struct RowRun {
  std::uint64_t count = 0;
  Bits eta{};
  std::uint64_t low_mask = 0;
  std::uint64_t value_class = 0;

  static constexpr std::uint64_t kNoClass = ~std::uint64_t(0);
  bool operator==(const RowRun&) const = default;
};

// All application rows of one pool term family: arity, variable position,
// and the window index read, with the exponent axis run-length compressed.
struct RowGroup {
  std::uint32_t arity = 0;
  std::uint32_t var = 0;
  std::uint64_t window = 0;
  std::vector<RowRun> runs;

  bool operator==(const RowGroup&) const = default;
};

// Compressed encoder value: determines the clause-level content of
// F0(n0,n1,n2) exactly for single-unary-operation algebras. Two values
// compare equal iff the fully expanded clause sets (header, pool, fingerprint
// tuples, low-index witnesses, term equalities) are equal.
class EncodedValue {
 public:
  EncodedValue() = default;
  EncodedValue(std::int64_t n0, std::uint64_t n1, std::uint64_t n2,
               std::vector<RowGroup> groups)
      : n0_(n0), n1_(n1), n2_(n2), groups_(std::move(groups)) {}

  std::int64_t n0() const { return n0_; }
  std::uint64_t n1() const { return n1_; }
  std::uint64_t n2() const { return n2_; }
  const std::vector<RowGroup>& groups() const { return groups_; }

  bool operator==(const EncodedValue&) const = default;

  // Row content for term op^d(x_var) of the given arity at a window index.
  const RowRun* find_row(std::uint32_t arity, std::uint64_t d, std::uint32_t var,
                         std::uint64_t window) const;
  // First row (in canonical order) witnessing the low index i: the term
  // exponent and the window index it reads. nullopt when i has no witness.
  struct Witness {
    std::uint32_t arity = 0;
    std::uint64_t exponent = 0;
    std::uint32_t var = 0;
    std::uint64_t window = 0;
  };
  std::optional<Witness> first_witness(std::uint64_t i) const;

  void serialize(ByteSink& sink) const;
  // Canonical hereditarily finite rendering; feeds hf_to_code.
  HFValue to_hf() const;
  nlohmann::json to_json() const;

 private:
  std::int64_t n0_ = -1;
  std::uint64_t n1_ = 0;
  std::uint64_t n2_ = 0;
  std::vector<RowGroup> groups_;
};

// Compressed F0(n0,n1,n2) over a length-n2 prefix. Requires an exact-closure
// algebra with a single unary operation and no constants.
EncodedValue encode_value(const Algebra& alg, std::int64_t n0, std::uint64_t n1,
                          std::uint64_t n2, const Prefix& pre,
                          std::uint64_t pool_budget = kDefaultPoolBudget);

// Literal F0(n0,n1,n2): the five clause components expanded as a
// hereditarily finite value. Exponential in the window width; guarded by the
// budget. Kept as the reference semantics for the compressed form.
HFValue encode_F0(const Algebra& alg, std::int64_t n0, std::uint64_t n1,
                  std::uint64_t n2, const Prefix& pre,
                  std::uint64_t budget = kDefaultPoolBudget);

// F_n = F0(k, l, n) with (k, l) the prefix's cut points; lengths 0 and 1 get
// the reserved trivial value.
EncodedValue encode_value_Fn(const Algebra& alg, const Prefix& pre,
                             std::uint64_t pool_budget = kDefaultPoolBudget);
CodeWord encode_Fn(const Algebra& alg, const Prefix& pre,
                   std::uint64_t pool_budget = kDefaultPoolBudget);

// Concatenation of self-delimiting blocks, block j framing the code of the
// length-j prefix: [digit count, base-2^32 digits little-endian]. The output
// for a prefix extends the output for every shorter one.
std::vector<std::uint64_t> monotone_encode(const Algebra& alg, const Prefix& pre,
                                           std::uint64_t pool_budget = kDefaultPoolBudget);
// Splits a monotone stream back into one CodeWord per prefix length.
std::vector<CodeWord> monotone_decode(const std::vector<std::uint64_t>& stream);

}  // namespace kalikow
