#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "kalikow/algebra.hpp"

using namespace kalikow;

namespace {

// Independent closure oracle: saturate the generator set under the algebra's
// operations until nothing new appears (all carriers here are naturals).
std::set<std::uint64_t> bfs_closure(const Algebra& alg,
                                    const std::set<std::uint64_t>& gens) {
  std::set<std::uint64_t> cl = gens;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::uint64_t> snapshot(cl.begin(), cl.end());
    for (std::uint64_t v : snapshot) {
      Ordinal args[] = {Ordinal::nat(v)};
      std::uint64_t out = alg.eval_op(0, args).as_nat();
      if (cl.insert(out).second) changed = true;
    }
  }
  return cl;
}

Ordinal random_ordinal_below_w3(Rng& rng) {
  std::vector<Ordinal::Term> terms;
  for (std::uint32_t e = 3; e-- > 0;) {
    std::uint64_t c = rng.below(5);
    if (c) terms.push_back({e, c});
  }
  return Ordinal(std::move(terms));
}

}  // namespace

TEST_CASE("predecessor decision rule matches saturation exhaustively") {
  Algebra pred = Algebra::predecessor();
  // every generator set within {0..12}, every target up to 20
  for (std::uint32_t mask = 0; mask < (1u << 13); ++mask) {
    std::set<std::uint64_t> gens;
    std::vector<Ordinal> gen_ords;
    for (std::uint32_t b = 0; b < 13; ++b)
      if (mask & (1u << b)) {
        gens.insert(b);
        gen_ords.push_back(Ordinal::nat(b));
      }
    std::set<std::uint64_t> oracle = bfs_closure(pred, gens);
    bool ok = true;
    for (std::uint64_t target = 0; target <= 20; ++target) {
      ClosureVerdict v = pred.closure_contains(Ordinal::nat(target), gen_ords);
      if (v.in() != (oracle.count(target) > 0)) ok = false;
      if (v.in()) {
        if (!v.witness.has_value() ||
            pred.eval_term(*v.witness, v.args) != Ordinal::nat(target))
          ok = false;
      }
    }
    REQUIRE_MESSAGE(ok, "generator mask ", mask);
  }
}

TEST_CASE("successor closure is the upward cone of the minimum") {
  Algebra succ = Algebra::successor();
  std::vector<Ordinal> gens = {Ordinal::nat(5), Ordinal::nat(9)};
  for (std::uint64_t t = 0; t < 30; ++t) {
    ClosureVerdict v = succ.closure_contains(Ordinal::nat(t), gens);
    CHECK(v.in() == (t >= 5));
    if (v.in()) CHECK(succ.eval_term(*v.witness, v.args) == Ordinal::nat(t));
  }
  CHECK_FALSE(succ.closure_contains(Ordinal::nat(4), gens).in());
}

TEST_CASE("pred_closure_set") {
  Algebra pred = Algebra::predecessor();
  std::vector<Ordinal> gens = {Ordinal::nat(3), Ordinal::nat(1)};
  CHECK(pred.pred_closure_set(gens) == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(pred.pred_closure_set({}).empty());
}

TEST_CASE("layered pairing: g inverts f and f is injective") {
  Algebra lay = Algebra::layered(3);
  Rng rng(2024);
  std::uint64_t tested = 0;
  while (tested < 10'000) {
    Ordinal alpha = random_ordinal_below_w3(rng);
    if (alpha.is_nat()) continue;  // pairing only acts above level 1
    Ordinal beta = random_ordinal_below_w3(rng);
    if (!(beta < alpha)) continue;
    Ordinal gamma = layered_f(lay, alpha, beta);
    CHECK(layered_g(lay, alpha, gamma) == beta);
    ++tested;
  }
  // injectivity of f(alpha, .) below a fixed alpha
  Ordinal alpha = Ordinal::omega_power(2, 2);
  std::set<std::string> images;
  std::uint64_t distinct = 0;
  for (std::uint64_t c1 = 0; c1 < 10; ++c1)
    for (std::uint64_t c0 = 0; c0 < 10; ++c0) {
      std::vector<Ordinal::Term> terms;
      if (c1) terms.push_back({1, c1});
      if (c0) terms.push_back({0, c0});
      Ordinal beta(std::move(terms));
      if (!(beta < alpha)) continue;
      ++distinct;
      images.insert(layered_f(lay, alpha, beta).to_string());
    }
  CHECK(images.size() == distinct);
}

TEST_CASE("layered closure is a semi-decision") {
  Algebra lay = Algebra::layered(3);
  CHECK(lay.closure_mode() == ClosureMode::bounded);
  std::vector<Ordinal> gens = {Ordinal::omega_power(1)};
  // naturals are constants, so they are always in
  CHECK(lay.closure_contains(Ordinal::nat(7), gens).in());
  ClosureVerdict far = lay.closure_contains(Ordinal::omega_power(2, 4), gens);
  CHECK(far.status != ClosureVerdict::Status::out);
  if (far.in()) CHECK(lay.eval_term(*far.witness, far.args) == Ordinal::omega_power(2, 4));
}

TEST_CASE("eval_op floors at zero for predecessor") {
  Algebra pred = Algebra::predecessor();
  Ordinal zero[] = {Ordinal::nat(0)};
  Ordinal five[] = {Ordinal::nat(5)};
  CHECK(pred.eval_op(0, zero) == Ordinal::nat(0));
  CHECK(pred.eval_op(0, five) == Ordinal::nat(4));
  Algebra succ = Algebra::successor();
  CHECK(succ.eval_op(0, five) == Ordinal::nat(6));
}
