#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kalikow/util.hpp"

namespace kalikow {

// Cantor-normal-form ordinal below w^N: a sum  w^e1*c1 + ... + w^ek*ck  with
// exponents strictly decreasing and coefficients >= 1. The empty sum is 0.
// Naturals are the exponent-0 case.
class Ordinal {
 public:
  using Term = std::pair<std::uint32_t, std::uint64_t>;  // (exponent, coefficient)

  Ordinal() = default;
  explicit Ordinal(std::vector<Term> terms);

  static Ordinal nat(std::uint64_t k);
  // w^e * c (+ nothing).
  static Ordinal omega_power(std::uint32_t e, std::uint64_t c = 1);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_nat() const { return terms_.empty() || terms_.front().first == 0; }
  std::uint64_t as_nat() const;  // throws if not a natural

  // Coefficient of w^e (0 if absent).
  std::uint64_t coeff(std::uint32_t e) const;

  // Largest exponent; rejects 0 (level-less by convention: level m spans
  // [w^m, w^{m+1}), with w^0 = 1).
  std::uint32_t level() const;

  std::strong_ordering operator<=>(const Ordinal& o) const;
  bool operator==(const Ordinal& o) const { return terms_ == o.terms_; }

  // Textual CNF syntax: "w^2*3 + w*1 + 5"; naturals are plain decimal.
  std::string to_string() const;
  static Ordinal parse(const std::string& text);

 private:
  std::vector<Term> terms_;
};

enum class Order { less, equal, greater };

Order ord_compare(const Ordinal& a, const Ordinal& b);
std::uint32_t ord_level(const Ordinal& a);

// Bijection between ordinals below w^N and the naturals, via the coefficient
// vector and an iterated Cantor pairing. Deterministic across runs; for N=1
// the code of a natural is itself (finite_identity).
class OrdinalCodec {
 public:
  explicit OrdinalCodec(std::uint32_t degree_bound = 4, bool finite_identity = true);

  std::uint32_t degree_bound() const { return degree_bound_; }
  bool finite_identity() const { return finite_identity_; }

  std::uint64_t code(const Ordinal& a) const;    // throws BudgetError on overflow
  Ordinal decode(std::uint64_t c) const;

 private:
  std::uint32_t degree_bound_;
  bool finite_identity_;
};

// Cantor pairing pi(x,y) = (x+y)(x+y+1)/2 + y and its inverse. Overflow
// raises BudgetError; callers sample coefficients well inside the range.
std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

}  // namespace kalikow
