#include "kalikow/algebra.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kalikow {

namespace {

// Bijection {sigma < w^m} <-> naturals, m >= 1: right-fold the coefficient
// vector (c_{m-1},...,c_0) through the Cantor pairing.
std::uint64_t code_below(std::uint32_t m, const Ordinal& sigma) {
  std::uint64_t acc = sigma.coeff(0);
  for (std::uint32_t e = 1; e < m; ++e) acc = cantor_pair(sigma.coeff(e), acc);
  return acc;
}

Ordinal decode_below(std::uint32_t m, std::uint64_t c) {
  std::vector<Ordinal::Term> terms;
  std::uint64_t acc = c;
  for (std::uint32_t e = m - 1; e > 0; --e) {
    auto [x, rest] = cantor_unpair(acc);
    if (x) terms.push_back({e, x});
    acc = rest;
  }
  if (acc) terms.push_back({0, acc});
  return Ordinal(std::move(terms));
}

// Split alpha (level m >= 1) into leading coefficient a of w^m and the
// remainder rho < w^m.
void split_leading(const Ordinal& alpha, std::uint32_t m, std::uint64_t& a, Ordinal& rho) {
  a = alpha.terms().front().second;
  std::vector<Ordinal::Term> rest(alpha.terms().begin() + 1, alpha.terms().end());
  rho = Ordinal(std::move(rest));
  (void)m;
}

// Low-block index: pairs (b, s) with b < a enumerate as s*a + b.
std::uint64_t checked_low(std::uint64_t s, std::uint64_t a, std::uint64_t b) {
  if (a && s > (~std::uint64_t(0) - b) / a) throw BudgetError("layered pairing overflow");
  return s * a + b;
}

// Bijection {beta < alpha} <-> naturals for alpha of level m >= 1.
// Elements split into the "low block" {w^m*b + sigma : b < a, sigma < w^m}
// and the tail {w^m*a + sigma : sigma < rho}; the tail is interleaved in
// front (finite rho) or on even ranks (infinite rho).
std::uint64_t rank_below(const Ordinal& beta, const Ordinal& alpha) {
  std::uint32_t m = alpha.level();
  std::uint64_t a;
  Ordinal rho;
  split_leading(alpha, m, a, rho);
  std::uint64_t b = beta.is_zero() ? 0 : beta.coeff(m);
  if (b < a) {
    std::vector<Ordinal::Term> rest;
    for (const auto& t : beta.terms())
      if (t.first < m) rest.push_back(t);
    std::uint64_t s = code_below(m, Ordinal(std::move(rest)));
    std::uint64_t low_index = checked_low(s, a, b);
    if (rho.is_zero()) return low_index;
    if (rho.is_nat()) return rho.as_nat() + low_index;
    return 2 * low_index + 1;
  }
  // Tail element: beta = w^m*a + sigma with sigma < rho.
  std::vector<Ordinal::Term> rest;
  for (const auto& t : beta.terms())
    if (t.first < m) rest.push_back(t);
  Ordinal sigma(std::move(rest));
  if (rho.is_nat()) return sigma.as_nat();
  return 2 * rank_below(sigma, rho);
}

Ordinal unrank_below(std::uint64_t r, const Ordinal& alpha) {
  std::uint32_t m = alpha.level();
  std::uint64_t a;
  Ordinal rho;
  split_leading(alpha, m, a, rho);
  auto low_element = [&](std::uint64_t low_index) {
    std::uint64_t s = low_index / a, b = low_index % a;
    Ordinal sigma = decode_below(m, s);
    std::vector<Ordinal::Term> terms;
    if (b) terms.push_back({m, b});
    for (const auto& t : sigma.terms()) terms.push_back(t);
    return Ordinal(std::move(terms));
  };
  auto tail_element = [&](const Ordinal& sigma) {
    std::vector<Ordinal::Term> terms;
    terms.push_back({m, a});
    for (const auto& t : sigma.terms()) terms.push_back(t);
    return Ordinal(std::move(terms));
  };
  if (rho.is_zero()) return low_element(r);
  if (rho.is_nat()) {
    std::uint64_t k = rho.as_nat();
    if (r < k) return tail_element(Ordinal::nat(r));
    return low_element(r - k);
  }
  if (r % 2 == 0) return tail_element(unrank_below(r / 2, rho));
  return low_element(r / 2);
}

}  // namespace

Algebra::Algebra(AlgebraKind kind, Signature sig, OrdinalCodec codec, ClosureMode mode,
                 std::uint32_t closure_depth)
    : kind_(kind),
      sig_(std::move(sig)),
      enumerator_(kind == AlgebraKind::layered
                      ? Signature{sig_.ops, 0}  // enumeration caps constants off
                      : sig_),
      codec_(codec),
      mode_(mode),
      closure_depth_(closure_depth) {}

Algebra Algebra::predecessor() {
  return Algebra(AlgebraKind::predecessor, Signature{{{"p", 1}}, 0}, OrdinalCodec(1, true),
                 ClosureMode::exact, 0);
}

Algebra Algebra::successor() {
  return Algebra(AlgebraKind::successor, Signature{{{"s", 1}}, 0}, OrdinalCodec(1, true),
                 ClosureMode::exact, 0);
}

Algebra Algebra::layered(std::uint32_t degree_bound, std::uint32_t closure_depth) {
  if (degree_bound < 1) throw ConfigError("layered algebra: N must be >= 1");
  return Algebra(AlgebraKind::layered,
                 Signature{{{"f", 2}, {"g", 2}}, Signature::kInfiniteConstants},
                 OrdinalCodec(degree_bound, true), ClosureMode::bounded, closure_depth);
}

std::string Algebra::name() const {
  switch (kind_) {
    case AlgebraKind::predecessor: return "predecessor";
    case AlgebraKind::successor: return "successor";
    case AlgebraKind::layered: return "layered";
  }
  return "?";
}

Ordinal Algebra::constant_value(std::uint64_t index) const {
  if (!sig_.has_constants()) throw ConfigError("algebra has no constants");
  return Ordinal::nat(index);
}

Ordinal Algebra::eval_op(std::uint32_t op, std::span<const Ordinal> args) const {
  switch (kind_) {
    case AlgebraKind::predecessor: {
      std::uint64_t k = args[0].as_nat();
      return Ordinal::nat(k ? k - 1 : 0);  // p(0) = 0 floor convention
    }
    case AlgebraKind::successor:
      return Ordinal::nat(args[0].as_nat() + 1);
    case AlgebraKind::layered:
      return op == 0 ? layered_f(*this, args[0], args[1]) : layered_g(*this, args[0], args[1]);
  }
  throw ConfigError("eval_op: bad algebra");
}

Ordinal Algebra::eval_term(const Term& t, std::span<const Ordinal> args) const {
  switch (t.kind) {
    case Term::Kind::var:
      if (t.index >= args.size()) throw ConfigError("eval_term: too few arguments");
      return args[t.index];
    case Term::Kind::constant:
      return constant_value(t.index);
    case Term::Kind::app: {
      std::vector<Ordinal> vals;
      vals.reserve(t.children.size());
      for (const auto& c : t.children) vals.push_back(eval_term(c, args));
      return eval_op((std::uint32_t)t.index, vals);
    }
  }
  throw ConfigError("eval_term: bad kind");
}

Ordinal layered_f(const Algebra& alg, const Ordinal& alpha, const Ordinal& beta) {
  if (alg.kind() != AlgebraKind::layered) throw ConfigError("layered_f: wrong algebra");
  if (alpha.is_zero() || alpha.is_nat()) return {};
  std::uint32_t m = alpha.level();
  if (m >= alg.codec().degree_bound()) return {};
  if (!(beta < alpha)) return {};
  return decode_below(m, rank_below(beta, alpha));
}

Ordinal layered_g(const Algebra& alg, const Ordinal& alpha, const Ordinal& gamma) {
  if (alg.kind() != AlgebraKind::layered) throw ConfigError("layered_g: wrong algebra");
  if (alpha.is_zero() || alpha.is_nat()) return {};
  std::uint32_t m = alpha.level();
  if (m >= alg.codec().degree_bound()) return {};
  if (!gamma.is_zero() && gamma.level() >= m) return {};
  return unrank_below(code_below(m, gamma), alpha);
}

std::vector<std::uint64_t> Algebra::pred_closure_set(std::span<const Ordinal> gens) const {
  if (kind_ != AlgebraKind::predecessor) throw ConfigError("pred_closure_set: wrong algebra");
  if (gens.empty()) return {};
  std::uint64_t mx = 0;
  for (const auto& g : gens) mx = std::max(mx, g.as_nat());
  std::vector<std::uint64_t> out(mx + 1);
  for (std::uint64_t i = 0; i <= mx; ++i) out[i] = i;
  return out;
}

ClosureVerdict Algebra::closure_contains(const Ordinal& target,
                                         std::span<const Ordinal> gens) const {
  ClosureVerdict v;
  v.args.assign(gens.begin(), gens.end());
  switch (kind_) {
    case AlgebraKind::predecessor: {
      // target in cl(gens) iff target <= some generator.
      std::uint64_t t = target.as_nat();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        std::uint64_t g = gens[i].as_nat();
        if (t <= g) {
          Term w = Term::var(i);
          for (std::uint64_t d = 0; d < g - t; ++d) w = Term::app(0, {std::move(w)});
          v.status = ClosureVerdict::Status::in;
          v.witness = std::move(w);
          return v;
        }
      }
      v.status = ClosureVerdict::Status::out;
      return v;
    }
    case AlgebraKind::successor: {
      // target in cl(gens) iff target >= some generator.
      std::uint64_t t = target.as_nat();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        std::uint64_t g = gens[i].as_nat();
        if (t >= g) {
          Term w = Term::var(i);
          for (std::uint64_t d = 0; d < t - g; ++d) w = Term::app(0, {std::move(w)});
          v.status = ClosureVerdict::Status::in;
          v.witness = std::move(w);
          return v;
        }
      }
      v.status = ClosureVerdict::Status::out;
      return v;
    }
    case AlgebraKind::layered: {
      // Constants cover all naturals.
      if (target.is_nat()) {
        v.status = ClosureVerdict::Status::in;
        v.witness = Term::constant(target.as_nat());
        return v;
      }
      // Bounded saturation over f,g from gens plus a small seed of
      // constants. Semi-decision: never `out`.
      constexpr std::uint64_t kSeedConstants = 8;
      constexpr std::size_t kSetBudget = 4000;
      std::map<Ordinal, Term> known;  // element -> derivation
      std::vector<Ordinal> frontier;
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (known.emplace(gens[i], Term::var(i)).second) frontier.push_back(gens[i]);
      for (std::uint64_t c = 0; c < kSeedConstants; ++c)
        if (known.emplace(Ordinal::nat(c), Term::constant(c)).second)
          frontier.push_back(Ordinal::nat(c));
      for (std::uint32_t d = 0; d < closure_depth_; ++d) {
        if (auto it = known.find(target); it != known.end()) {
          v.status = ClosureVerdict::Status::in;
          v.witness = it->second;
          v.depth = d;
          return v;
        }
        // Only pairs touching the previous round's frontier can be new.
        std::vector<std::pair<Ordinal, Term>> fresh;
        auto consider = [&](const Ordinal& a, const Term& ta, const Ordinal& b,
                            const Term& tb) {
          for (std::uint32_t op = 0; op < 2; ++op) {
            Ordinal r = op == 0 ? layered_f(*this, a, b) : layered_g(*this, a, b);
            if (!known.count(r)) fresh.push_back({std::move(r), Term::app(op, {ta, tb})});
          }
        };
        for (const auto& a : frontier) {
          const Term& ta = known.at(a);
          for (const auto& [b, tb] : known) {
            consider(a, ta, b, tb);
            consider(b, tb, a, ta);
          }
        }
        frontier.clear();
        for (auto& [r, t] : fresh)
          if (known.emplace(r, std::move(t)).second) frontier.push_back(r);
        if (known.size() > kSetBudget)
          throw BudgetError("layered closure: saturation budget exceeded");
        if (frontier.empty()) break;  // saturated early
      }
      if (auto it = known.find(target); it != known.end()) {
        v.status = ClosureVerdict::Status::in;
        v.witness = it->second;
        v.depth = closure_depth_;
        return v;
      }
      v.status = ClosureVerdict::Status::unknown;
      v.depth = closure_depth_;
      return v;
    }
  }
  throw ConfigError("closure_contains: bad algebra");
}

}  // namespace kalikow
