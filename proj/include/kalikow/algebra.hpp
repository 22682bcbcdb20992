#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kalikow/ordinal.hpp"
#include "kalikow/term.hpp"

namespace kalikow {

enum class AlgebraKind { predecessor, successor, layered };
enum class ClosureMode { exact, bounded };

// Outcome of a closure membership query. An `in` verdict always carries a
// witness term over the cited generators (variables index into `args`);
// re-evaluating it must reproduce the target. `out` is only issued in exact
// mode; bounded mode degrades to `unknown` with the exhausted depth.
struct ClosureVerdict {
  enum class Status { in, out, unknown };
  Status status = Status::out;
  std::optional<Term> witness;
  std::vector<Ordinal> args;
  std::uint32_t depth = 0;

  bool in() const { return status == Status::in; }
};

// An algebra over a computable carrier: naturals (predecessor/successor) or
// CNF ordinals below w^N (layered). Immutable after construction; all
// operations are pure.
class Algebra {
 public:
  static Algebra predecessor();
  static Algebra successor();
  static Algebra layered(std::uint32_t degree_bound, std::uint32_t closure_depth = 6);

  AlgebraKind kind() const { return kind_; }
  const Signature& signature() const { return sig_; }
  const TermEnumerator& terms() const { return enumerator_; }
  const OrdinalCodec& codec() const { return codec_; }
  ClosureMode closure_mode() const { return mode_; }
  std::uint32_t closure_depth() const { return closure_depth_; }
  bool exact() const { return mode_ == ClosureMode::exact; }
  // Single unary operation, no constants: term normal forms are op^d(x_i).
  bool unary_shaped() const { return kind_ != AlgebraKind::layered; }

  Ordinal constant_value(std::uint64_t index) const;
  Ordinal eval_op(std::uint32_t op, std::span<const Ordinal> args) const;
  Ordinal eval_term(const Term& t, std::span<const Ordinal> args) const;

  // Does `target` lie in the closure of `gens` (plus all constants)?
  ClosureVerdict closure_contains(const Ordinal& target,
                                  std::span<const Ordinal> gens) const;

  // Exact closure of a finite generator set as an explicit finite set;
  // defined for the predecessor algebra (downward closure of the max).
  std::vector<std::uint64_t> pred_closure_set(std::span<const Ordinal> gens) const;

  std::string name() const;

 private:
  Algebra(AlgebraKind kind, Signature sig, OrdinalCodec codec, ClosureMode mode,
          std::uint32_t closure_depth);

  AlgebraKind kind_;
  Signature sig_;
  TermEnumerator enumerator_;
  OrdinalCodec codec_;
  ClosureMode mode_;
  std::uint32_t closure_depth_;
};

// The layered algebra's pairing bijections: for alpha of level m >= 1,
// f(alpha,.) restricted to {beta < alpha} is a bijection onto
// {gamma < w^m}, and g(alpha,.) is its inverse. Off the meaningful branch
// both return 0 (the operations are total).
Ordinal layered_f(const Algebra& alg, const Ordinal& alpha, const Ordinal& beta);
Ordinal layered_g(const Algebra& alg, const Ordinal& alpha, const Ordinal& gamma);

}  // namespace kalikow
