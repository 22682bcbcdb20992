#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kalikow/util.hpp"

namespace kalikow {

// A signature: named operations with arities, plus constants. Constants are
// either absent, a finite family, or a countably-enumerated family (the
// layered algebra's naturals). Term enumeration requires the finite case.
struct Signature {
  struct Op {
    std::string name;
    std::uint32_t arity;
  };
  std::vector<Op> ops;
  std::uint64_t constant_count = 0;  // kInfiniteConstants = countably many

  static constexpr std::uint64_t kInfiniteConstants = ~std::uint64_t(0);

  bool has_constants() const { return constant_count != 0; }
  std::uint32_t op_index(const std::string& name) const;
};

// First-order term: variables x0,x1,..., constant references, applications.
struct Term {
  enum class Kind : std::uint8_t { var, constant, app };
  Kind kind = Kind::var;
  std::uint64_t index = 0;      // var index / constant index / op index
  std::vector<Term> children;   // applications only

  static Term var(std::uint64_t i) { return {Kind::var, i, {}}; }
  static Term constant(std::uint64_t i) { return {Kind::constant, i, {}}; }
  static Term app(std::uint64_t op, std::vector<Term> ch) {
    return {Kind::app, op, std::move(ch)};
  }

  bool operator==(const Term&) const = default;

  std::uint64_t node_count() const;
  // 1 + max variable index, 0 if variable-free.
  std::uint64_t var_span() const;
  // Indices of variables that actually occur, ascending, deduplicated.
  std::vector<std::uint32_t> used_vars() const;

  // "p(p(x0))", "f(x0,c1)".
  std::string to_string(const Signature& sig) const;
  static Term parse(const std::string& text, const Signature& sig);

  // Substitute repl[i] for variable x_i.
  Term substituted(const std::vector<Term>& repl) const;
};

// Canonical enumeration of the n-place terms of a signature, ordered by node
// count, then (within one size) variables before constants before
// applications, applications by operation order, child-size composition in
// lexicographic order, then child tuples lexicographically by rank. This
// guarantees term(n, i) = x_i for i < n. The order is fixed globally: pool
// contents and the g-statistics downstream depend on it.
class TermEnumerator {
 public:
  explicit TermEnumerator(Signature sig);

  const Signature& signature() const { return sig_; }

  Term term(std::uint32_t arity, std::uint64_t index) const;
  std::uint64_t index_of(const Term& t, std::uint32_t arity) const;

  // Number of n-place terms with exactly `size` nodes.
  std::uint64_t count(std::uint32_t arity, std::uint64_t size) const;

 private:
  // Sum of count(arity, s) for 1 <= s < size.
  std::uint64_t count_below(std::uint32_t arity, std::uint64_t size) const;
  Term unrank(std::uint32_t arity, std::uint64_t size, std::uint64_t rank) const;
  // Within-size-class rank; reports the node count through size_out.
  std::uint64_t rank_of(const Term& t, std::uint32_t arity, std::uint64_t& size_out) const;

  Signature sig_;
  mutable std::vector<std::vector<std::uint64_t>> count_memo_;  // [arity][size]
  mutable std::vector<std::vector<std::uint64_t>> cum_memo_;    // prefix sums
};

}  // namespace kalikow
