#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kalikow/sequence.hpp"

using namespace kalikow;

namespace {

SequenceSpec ep96_56() {
  return SequenceSpec::eventually_periodic({Ordinal::nat(9)},
                                           {Ordinal::nat(5), Ordinal::nat(6)});
}

}  // namespace

TEST_CASE("entries of an eventually periodic sequence") {
  SequenceSpec s = ep96_56();
  CHECK(s.entry(0) == Ordinal::nat(9));
  CHECK(s.entry(1) == Ordinal::nat(5));
  CHECK(s.entry(2) == Ordinal::nat(6));
  CHECK(s.entry(3) == Ordinal::nat(5));
  CHECK(s.entry(4) == Ordinal::nat(6));
  CHECK(s.cycle_length() == 2);
  CHECK(s.settled_index() == 1);
}

TEST_CASE("entries of a ramp") {
  SequenceSpec r = SequenceSpec::ramp(1, 0);
  for (std::uint64_t n = 0; n < 10; ++n) CHECK(r.entry(n) == Ordinal::nat(n));
  CHECK(r.entry(7) == Ordinal::nat(7));
  CHECK(r.cycle_length() == 1);
  SequenceSpec r2 = SequenceSpec::ramp(2, 3);
  CHECK(r2.entry(5) == Ordinal::nat(13));
}

TEST_CASE("edits override the base description") {
  SequenceSpec s = ep96_56().perturbed(
      {{2, Ordinal::nat(9)}, {4, Ordinal::nat(1)}});
  CHECK(s.entry(2) == Ordinal::nat(9));
  CHECK(s.entry(4) == Ordinal::nat(1));
  CHECK(s.entry(3) == Ordinal::nat(5));
  CHECK(s.entry(6) == Ordinal::nat(6));
  CHECK(s.settled_index() == 5);
  CHECK(s.prefix(5) == std::vector<Ordinal>{Ordinal::nat(9), Ordinal::nat(5),
                                            Ordinal::nat(9), Ordinal::nat(5),
                                            Ordinal::nat(1)});
}

TEST_CASE("string round trips") {
  const char* samples[] = {"ep:9;5,6", "ep:;5", "ramp:1,0", "ramp:0,4",
                           "ep:9;5,6;2=9,4=1", "ep:3,1;4,1,5;0=2"};
  for (const char* text : samples) {
    SequenceSpec s = SequenceSpec::parse(text);
    CHECK(s.to_string() == text);
    CHECK(SequenceSpec::parse(s.to_string()) == s);
  }
  CHECK(SequenceSpec::parse("ep:9;5,6") == ep96_56());
  SequenceSpec r = SequenceSpec::parse("ramp:1,0");
  CHECK(r.kind == SequenceSpec::Kind::ramp);
  CHECK(r.slope == 1);
  CHECK(r.offset == 0);
}

TEST_CASE("json round trips") {
  for (const char* text : {"ep:9;5,6;2=9", "ramp:2,1", "ep:;7"}) {
    SequenceSpec s = SequenceSpec::parse(text);
    CHECK(SequenceSpec::from_json(s.to_json()) == s);
  }
  PairSpec p = PairSpec::parse("ep:9;5,6|ep:9;5,6;2=9");
  nlohmann::json j = p.to_json();
  PairSpec q = PairSpec::from_json(j);
  CHECK(q.left == p.left);
  CHECK(q.right == p.right);
  CHECK(q.relation == p.relation);
}

TEST_CASE("relation certificates") {
  SequenceSpec base = ep96_56();
  CHECK(certify_relation(base, base.perturbed({{2, Ordinal::nat(9)}})) ==
        PairRelation::almost_equal);
  CHECK(certify_relation(base, SequenceSpec::eventually_periodic(
                                   {Ordinal::nat(9)},
                                   {Ordinal::nat(6), Ordinal::nat(5)})) ==
        PairRelation::divergent);
  CHECK(certify_relation(base, SequenceSpec::ramp(1, 0)) ==
        PairRelation::divergent);
  CHECK(certify_relation(SequenceSpec::ramp(1, 0), SequenceSpec::ramp(1, 2)) ==
        PairRelation::divergent);
  CHECK(certify_relation(SequenceSpec::ramp(1, 2),
                         SequenceSpec::ramp(1, 2).perturbed(
                             {{3, Ordinal::nat(0)}})) ==
        PairRelation::almost_equal);
  // different phase of the same cycle values, aligned over the lcm
  SequenceSpec shifted = SequenceSpec::eventually_periodic(
      {Ordinal::nat(9), Ordinal::nat(5)}, {Ordinal::nat(6), Ordinal::nat(5)});
  CHECK(certify_relation(base, shifted) == PairRelation::almost_equal);
}

TEST_CASE("pair validation rejects a mis-declared relation") {
  SequenceSpec base = ep96_56();
  SequenceSpec edited = base.perturbed({{2, Ordinal::nat(9)}});
  CHECK_NOTHROW(PairSpec::make(base, edited, PairRelation::almost_equal));
  CHECK_THROWS_AS(PairSpec::make(base, edited, PairRelation::divergent),
                  ConfigError);
  PairSpec auto_pair = PairSpec::certified(base, SequenceSpec::ramp(1, 0));
  CHECK(auto_pair.relation == PairRelation::divergent);
}

TEST_CASE("agreement index covers heads and edits") {
  SequenceSpec base = ep96_56();
  PairSpec p = PairSpec::certified(base, base.perturbed({{2, Ordinal::nat(9)}}));
  std::uint64_t a = p.agreement_index();
  CHECK(a >= 3);
  for (std::uint64_t n = a; n < a + 20; ++n)
    CHECK(p.left.entry(n) == p.right.entry(n));
  CHECK(p.combined_cycle_length() == 2);
  SequenceSpec three = SequenceSpec::eventually_periodic(
      {}, {Ordinal::nat(5), Ordinal::nat(6), Ordinal::nat(5)});
  PairSpec q = PairSpec::certified(ep96_56(), three);
  CHECK(q.combined_cycle_length() == 6);
}
