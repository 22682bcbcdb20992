#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "kalikow/analysis.hpp"

using namespace kalikow;

namespace {

SequenceSpec canonical() { return SequenceSpec::parse("ep:9;5,6"); }

PairSpec canonical_pair() {
  SequenceSpec base = canonical();
  return PairSpec::certified(base, base.perturbed({{2, Ordinal::nat(9)}}));
}

}  // namespace

TEST_CASE("tail records of eventually periodic sequences") {
  Algebra pred = Algebra::predecessor();
  TailReport a = tail_u(pred, canonical());
  CHECK_FALSE(a.violated);
  CHECK(a.u_inf == std::vector<std::uint64_t>{0});
  CHECK(a.n_star == 1);
  TailReport b = tail_u(pred, SequenceSpec::parse("ep:;5"));
  CHECK_FALSE(b.violated);
  CHECK(b.u_inf == std::vector<std::uint64_t>{0});
  CHECK(b.n_star == 1);
  // a spike above the cycle stays a record forever
  TailReport c = tail_u(pred, SequenceSpec::parse("ep:9;5,6;3=12"));
  CHECK_FALSE(c.violated);
  CHECK(c.u_inf == std::vector<std::uint64_t>{0, 3});
  CHECK(c.n_star == 4);
}

TEST_CASE("growing ramps escape every tail closure under successor") {
  TailReport r = tail_u(Algebra::successor(), SequenceSpec::parse("ramp:1,0"));
  CHECK(r.violated);
  CHECK_FALSE(r.witnesses.empty());
  // under predecessor every entry sits below some later one
  TailReport s = tail_u(Algebra::predecessor(), SequenceSpec::parse("ramp:1,0"));
  CHECK_FALSE(s.violated);
}

TEST_CASE("tail records agree with finite prefixes") {
  Algebra pred = Algebra::predecessor();
  for (const char* text : {"ep:9;5,6", "ep:9;5,6;2=9,4=1", "ep:;7,3", "ep:3,1;4,1,5"}) {
    SequenceSpec spec = SequenceSpec::parse(text);
    TailReport r = tail_u(pred, spec);
    REQUIRE_FALSE(r.violated);
    // on a long prefix, the u-set restricted below the settled zone matches
    std::uint64_t n = spec.settled_index() + 8 * spec.cycle_length() + 16;
    auto u = compute_u(pred, spec.prefix(n));
    std::set<std::uint64_t> uset(u.begin(), u.end());
    for (std::uint64_t l : r.u_inf) CHECK(uset.count(l) == 1);
    for (std::uint64_t l = 0; l < r.n_star + 4 && l < n / 2; ++l)
      if (!std::count(r.u_inf.begin(), r.u_inf.end(), l)) CHECK(uset.count(l) == 0);
  }
}

TEST_CASE("stabilization threshold examples") {
  Algebra pred = Algebra::predecessor();
  CHECK(threshold_n1(pred, canonical(), 2) == 8);
  CHECK(threshold_n1(pred, SequenceSpec::parse("ep:;5"), 2) == 6);
  // monotone in the cut
  std::uint64_t prev = 0;
  for (std::uint64_t n0 = 1; n0 <= 8; ++n0) {
    std::uint64_t t = threshold_n1(pred, canonical(), n0);
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("pair thresholds are ordered") {
  Algebra pred = Algebra::predecessor();
  ThresholdReport th = thresholds_pair(pred, canonical_pair());
  CHECK(th.n_star <= th.n0);
  CHECK(th.n0 <= th.n1);
  CHECK(th.n1 <= th.n2);
  CHECK(th.n2 <= th.n3);
  CHECK(th.n_star == 3);
  CHECK(th.n0 == 3);
  CHECK(th.n1 == 9);
  CHECK(th.n3 == 20);
}

TEST_CASE("cut point divergence along one sequence") {
  Algebra pred = Algebra::predecessor();
  PropertyReport r = check_cl4(pred, canonical(), {2, 4}, 64);
  CHECK(r.pass());
  CHECK(r.checks > 0);
  // a tail violation is reported as a counterexample, not thrown
  PropertyReport bad = check_cl4(Algebra::successor(), SequenceSpec::ramp(1, 0), {2}, 32);
  CHECK_FALSE(bad.pass());
}

TEST_CASE("cut point agreement for almost-equal pairs") {
  Algebra pred = Algebra::predecessor();
  PropertyReport r = check_cl5(pred, canonical_pair(), 48);
  CHECK(r.pass());
  // identical members agree trivially
  PairSpec same = PairSpec::certified(canonical(), canonical());
  CHECK(check_cl5(pred, same, 40).pass());
  // divergent input is a configuration error
  PairSpec div = PairSpec::certified(canonical(), SequenceSpec::parse("ep:9;6,5"));
  CHECK_THROWS_AS(check_cl5(pred, div, 40), ConfigError);
}

TEST_CASE("code agreement for almost-equal pairs") {
  Algebra pred = Algebra::predecessor();
  PropertyReport r = check_cl7(pred, canonical_pair(), 48);
  CHECK(r.pass());
  CHECK_THROWS_AS(
      check_cl7(pred, PairSpec::certified(canonical(), SequenceSpec::parse("ep:9;6,5")),
                40),
      ConfigError);
}

TEST_CASE("code divergence for divergent pairs") {
  Algebra pred = Algebra::predecessor();
  PairSpec div = PairSpec::certified(canonical(), SequenceSpec::parse("ep:9;6,5"));
  PropertyReport r = check_cl8(pred, div, 2, 0, 64);
  CHECK(r.pass());
  CHECK_THROWS_AS(check_cl8(pred, canonical_pair(), 2, 0, 64), ConfigError);
}

TEST_CASE("tail closure battery") {
  Algebra pred = Algebra::predecessor();
  Star0Report ok = star0_check(pred, canonical(), 48);
  CHECK(ok.verdict == Star0Report::Verdict::holds);
  CHECK(ok.u_inf == std::vector<std::uint64_t>{0});
  Star0Report bad = star0_check(Algebra::successor(), SequenceSpec::ramp(1, 0), 48);
  CHECK(bad.verdict == Star0Report::Verdict::violated);
  CHECK_FALSE(bad.ok());
  Star0Report trunc = star0_check(Algebra::layered(3), canonical(), 24);
  CHECK(trunc.verdict == Star0Report::Verdict::truncated_holds);
}

TEST_CASE("closure descent") {
  Algebra pred = Algebra::predecessor();
  Star1Report r = star1_descent(pred, {Ordinal::nat(5)}, 20);
  CHECK_FALSE(r.descended);
  CHECK(r.stabilized_at == 5);
  Star1Report empty = star1_descent(pred, {}, 20);
  CHECK_FALSE(empty.descended);
  CHECK(empty.stabilized_at == 0);
  Star1Report s =
      star1_descent(Algebra::successor(), {Ordinal::nat(5)}, 20, DescentRule::shift_up);
  CHECK(s.descended);
  CHECK(s.steps == 20);
}

TEST_CASE("uniform tail closure probe") {
  Algebra pred = Algebra::predecessor();
  Star2Report ok = star2_probe(pred, canonical(), 4);
  CHECK(ok.holds);
  CHECK_FALSE(ok.reason.empty());
  // a spike above the cycle max breaks uniformity only if kept in the tail
  Star2Report spiked = star2_probe(pred, SequenceSpec::parse("ep:9;5,6;3=12"), 2);
  CHECK_FALSE(spiked.holds);
  Star2Report cut = star2_probe(pred, SequenceSpec::parse("ep:9;5,6;3=12"), 4);
  CHECK(cut.holds);
}

TEST_CASE("decode replay recovers an early entry") {
  Algebra pred = Algebra::predecessor();
  RecoveryReport r = decode_replay(pred, canonical(), 1, 8);
  REQUIRE(r.status == RecoveryReport::Status::recovered);
  CHECK(r.recovered == r.truth);
  CHECK(r.truth == eta_prefix(pred, Ordinal::nat(5), std::uint32_t(r.chain.front())));
  REQUIRE(r.chain.size() >= 2);
  CHECK(r.chain.front() > 8);
  CHECK(r.chain.back() <= 1 + 1);
  for (std::size_t i = 1; i < r.chain.size(); ++i) CHECK(r.chain[i] < r.chain[i - 1]);
  // the records themselves carry no witnesses
  RecoveryReport rec = decode_replay(pred, canonical(), 0, 8);
  CHECK(rec.status == RecoveryReport::Status::not_recoverable_by_chain);
}

TEST_CASE("replay respects its search horizon") {
  Algebra pred = Algebra::predecessor();
  RecoveryReport r = decode_replay(pred, canonical(), 1, 8, 2);
  CHECK(r.status == RecoveryReport::Status::no_chain_anchor);
}
