#include "kalikow/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace kalikow {

namespace {

constexpr std::uint64_t kFSearchCap = 1u << 20;
constexpr std::size_t kMaxRecorded = 32;
constexpr std::size_t kReplayGuard = 4096;

std::uint64_t nat_entry(const SequenceSpec& spec, std::uint64_t n) {
  Ordinal e = spec.entry(n);
  if (!e.is_nat()) throw ConfigError("analysis: sequence entry is not a natural");
  return e.as_nat();
}

void require_symbolic(const Algebra& alg) {
  if (!alg.exact())
    throw ConfigError("analysis: symbolic tail closure needs an exact-closure algebra");
}

// End index of a finite window (l, end] whose closure equals the closure of
// the whole tail beyond l. Eventually periodic tails (and flat ramps) repeat
// their value set once per cycle. A growing ramp under the downward-closure
// algebra only needs one entry at least as large as the queried one; under
// the upward-closure algebra the window minimum is already the tail minimum.
std::uint64_t tail_window_end(const Algebra& alg, const SequenceSpec& spec,
                              std::uint64_t l) {
  std::uint64_t s = spec.settled_index();
  if (spec.kind == SequenceSpec::Kind::eventually_periodic || spec.slope == 0)
    return std::max(l, s) + spec.cycle_length();
  if (alg.kind() == AlgebraKind::predecessor) {
    std::uint64_t v = nat_entry(spec, l);
    std::uint64_t reach = v > spec.offset ? (v - spec.offset) / spec.slope + 1 : 1;
    return std::max({l + 1, s, reach}) + 1;
  }
  return std::max(l + 1, s + 1);
}

bool tail_contains(const Algebra& alg, const SequenceSpec& spec, std::uint64_t l) {
  std::uint64_t end = tail_window_end(alg, spec, l);
  std::vector<Ordinal> gens;
  gens.reserve(end - l);
  for (std::uint64_t k = l + 1; k <= end; ++k) gens.push_back(spec.entry(k));
  return alg.closure_contains(spec.entry(l), gens).in();
}

// f and g for an index of the infinite sequence: widen the session's search
// window until a closure witness appears. Callers only ask about indices
// outside the tail u-set, where a witness exists.
std::pair<std::uint64_t, std::uint64_t> fg_unbounded(Session& ses, const SequenceSpec& spec,
                                                     std::uint64_t l) {
  std::uint64_t bound =
      std::max<std::uint64_t>(spec.settled_index() + spec.cycle_length() + l + 3, 64);
  while (!ses.f_within(l, bound)) {
    if (bound >= kFSearchCap)
      throw ConfigError("analysis: no closure window found within the search cap");
    bound *= 2;
  }
  return ses.fg(l, bound);
}

// One round of the stabilization recursion: max of f_n + g_n + 2 over
// n <= n0 outside the tail u-set.
std::uint64_t n1_step(Session& ses, const SequenceSpec& spec,
                      const std::vector<std::uint64_t>& u_inf, std::uint64_t n0) {
  std::uint64_t best = 0;
  for (std::uint64_t n = 1; n <= n0; ++n) {
    if (std::binary_search(u_inf.begin(), u_inf.end(), n)) continue;
    auto [f, g] = fg_unbounded(ses, spec, n);
    best = std::max(best, f + g + 2);
  }
  return best;
}

std::string at_length(std::uint64_t n) { return " at length " + std::to_string(n); }

}  // namespace

nlohmann::json TailReport::to_json() const {
  return {{"violated", violated},
          {"u_inf", u_inf},
          {"n_star", n_star},
          {"witnesses", witnesses}};
}

TailReport tail_u(const Algebra& alg, const SequenceSpec& spec) {
  require_symbolic(alg);
  TailReport rep;
  std::uint64_t s = spec.settled_index();
  bool growing = spec.kind == SequenceSpec::Kind::ramp && spec.slope > 0;
  // Indices >= s behave uniformly (periodically, or monotonically for a
  // growing ramp), so an escape among these representatives recurs forever.
  std::uint64_t reps = growing ? 4 : spec.cycle_length();
  for (std::uint64_t l = s; l < s + reps; ++l)
    if (!tail_contains(alg, spec, l)) rep.witnesses.push_back(l);
  if (!rep.witnesses.empty()) {
    rep.violated = true;
    return rep;
  }
  rep.u_inf.push_back(0);
  for (std::uint64_t l = 1; l < s; ++l)
    if (!tail_contains(alg, spec, l)) rep.u_inf.push_back(l);
  rep.n_star = rep.u_inf.back() + 1;
  return rep;
}

std::uint64_t threshold_n1(const Algebra& alg, const SequenceSpec& spec,
                           std::uint64_t n0) {
  TailReport tail = tail_u(alg, spec);
  if (tail.violated) throw ConfigError("analysis: tail escape set is infinite");
  if (n0 < tail.n_star) throw ConfigError("analysis: n0 is below the tail bound");
  Session ses(alg, spec);
  return n1_step(ses, spec, tail.u_inf, n0);
}

nlohmann::json ThresholdReport::to_json() const {
  return {{"n_star", n_star}, {"n0", n0},   {"n1", n1},
          {"n2", n2},         {"n3", n3},   {"chain", chain}};
}

ThresholdReport thresholds_pair(const Algebra& alg, const PairSpec& pair) {
  if (pair.relation != PairRelation::almost_equal)
    throw ConfigError("analysis: stabilization thresholds need an almost-equal pair");
  TailReport tl = tail_u(alg, pair.left);
  TailReport tr = tail_u(alg, pair.right);
  if (tl.violated || tr.violated)
    throw ConfigError("analysis: tail escape set is infinite");
  ThresholdReport rep;
  rep.n_star = std::max(tl.n_star, tr.n_star);
  rep.n0 = std::max(rep.n_star, pair.agreement_index());
  Session sl(alg, pair.left), sr(alg, pair.right);
  std::uint64_t cur = rep.n0;
  std::uint64_t rounds[3];
  for (auto& out : rounds) {
    cur = std::max(n1_step(sl, pair.left, tl.u_inf, cur),
                   n1_step(sr, pair.right, tr.u_inf, cur));
    out = cur;
  }
  rep.n1 = rounds[0];
  rep.n2 = rounds[1];
  rep.n3 = rounds[2];
  return rep;
}

void PropertyReport::note_failure(std::string what) {
  if (counterexamples.size() < kMaxRecorded) counterexamples.push_back(std::move(what));
}

nlohmann::json PropertyReport::to_json() const {
  return {{"claim", claim},           {"horizon", horizon},
          {"seed", seed},             {"checks", checks},
          {"thresholds", thresholds}, {"pass", pass()},
          {"counterexamples", counterexamples}};
}

std::string PropertyReport::csv_header() {
  return "claim,horizon,seed,checks,pass,counterexamples";
}

std::string PropertyReport::csv_row() const {
  return claim + "," + std::to_string(horizon) + "," + std::to_string(seed) + "," +
         std::to_string(checks) + "," + (pass() ? "1" : "0") + "," +
         std::to_string(counterexamples.size());
}

PropertyReport check_cl4(const Algebra& alg, const SequenceSpec& spec,
                         const std::vector<std::uint64_t>& grid, std::uint64_t horizon) {
  PropertyReport rep;
  rep.claim = "cl4";
  rep.horizon = horizon;
  TailReport tail = tail_u(alg, spec);
  if (tail.violated) {
    rep.thresholds["star0_violation"] = tail.witnesses;
    for (std::uint64_t w : tail.witnesses)
      rep.note_failure("tail escape at index " + std::to_string(w));
    return rep;
  }
  std::uint64_t u_max = tail.u_inf.back();
  Session ses(alg, spec);
  auto n1_of = [&](std::uint64_t n0) { return n1_step(ses, spec, tail.u_inf, n0); };
  auto first_max_record = [&](std::uint64_t from) {
    for (std::uint64_t n = std::max<std::uint64_t>(from, 2); n <= horizon; ++n)
      if (ses.lmk(n).k0 == u_max) return n;
    throw ConfigError("analysis: horizon too small for a max-record witness");
  };
  nlohmann::json per_grid = nlohmann::json::array();
  for (std::uint64_t n0 : grid) {
    std::uint64_t n1 = n1_of(n0);
    if (n1 > horizon)
      throw ConfigError("analysis: horizon is below the stabilization threshold");
    std::uint64_t witness = 0;
    for (std::uint64_t n = n1; n <= horizon; ++n) {
      CutPoints cp = ses.lmk(n);
      ++rep.checks;
      if (cp.k1 <= n0) rep.note_failure("k1 stuck at or below the grid point" + at_length(n));
      if (cp.l <= n0) rep.note_failure("l stuck at or below the grid point" + at_length(n));
      if (cp.k0 != u_max && cp.k0 <= n0)
        rep.note_failure("k0 neither the tail record maximum nor past the grid point" +
                         at_length(n));
      if (cp.k0 == u_max && witness == 0) witness = n;
    }
    if (witness == 0)
      rep.note_failure("no length in range attains k0 = tail record maximum for n0 " +
                       std::to_string(n0));
    // m exceeds n0 from the composed threshold on: restart the recursion at
    // the first max-record witness past n1.
    std::uint64_t m2 = first_max_record(n1);
    std::uint64_t m3 = n1_of(m2);
    if (m3 > horizon) throw ConfigError("analysis: horizon is below the m-threshold");
    for (std::uint64_t n = m3; n <= horizon; ++n) {
      ++rep.checks;
      if (ses.lmk(n).m <= n0)
        rep.note_failure("m stuck at or below the grid point" + at_length(n));
    }
    // k = l at the shorter prefix of length m, so pushing m past n1 pushes
    // k past n0; that needs the same construction one level up.
    std::uint64_t t = n1_of(n1);
    std::uint64_t m2k = first_max_record(t);
    std::uint64_t m4 = n1_of(m2k);
    if (m4 > horizon) throw ConfigError("analysis: horizon is below the k-threshold");
    for (std::uint64_t n = m4; n <= horizon; ++n) {
      ++rep.checks;
      if (ses.lmk(n).k <= static_cast<std::int64_t>(n0))
        rep.note_failure("k stuck at or below the grid point" + at_length(n));
    }
    per_grid.push_back({{"n0", n0},
                        {"n1", n1},
                        {"m2", m2},
                        {"m3", m3},
                        {"m4", m4},
                        {"max_record_witness", witness}});
  }
  rep.thresholds["grid"] = std::move(per_grid);
  rep.thresholds["u_inf"] = tail.u_inf;
  return rep;
}

PropertyReport check_cl5(const Algebra& alg, const PairSpec& pair, std::uint64_t horizon) {
  PropertyReport rep;
  rep.claim = "cl5";
  rep.horizon = horizon;
  if (certify_relation(pair.left, pair.right) != PairRelation::almost_equal)
    throw ConfigError("analysis: cl5 needs an almost-equal pair");
  ThresholdReport th = thresholds_pair(alg, pair);
  if (th.n3 > horizon) throw ConfigError("analysis: horizon is below n3");
  Session sl(alg, pair.left), sr(alg, pair.right);
  auto agree = [&](std::uint64_t n) {
    CutPoints a = sl.lmk(n), b = sr.lmk(n);
    return a.l == b.l && a.m == b.m && a.k == b.k;
  };
  std::uint64_t start = std::max<std::uint64_t>(th.n3, 2);
  for (std::uint64_t n = start; n <= horizon; ++n) {
    ++rep.checks;
    if (!agree(n)) rep.note_failure("cut statistics differ" + at_length(n));
  }
  std::uint64_t onset = start;
  while (onset > 2 && agree(onset - 1)) --onset;
  rep.thresholds = th.to_json();
  rep.thresholds["first_agreement"] = onset;
  return rep;
}

PropertyReport check_cl7(const Algebra& alg, const PairSpec& pair, std::uint64_t horizon) {
  PropertyReport rep;
  rep.claim = "cl7";
  rep.horizon = horizon;
  if (certify_relation(pair.left, pair.right) != PairRelation::almost_equal)
    throw ConfigError("analysis: cl7 needs an almost-equal pair");
  ThresholdReport th = thresholds_pair(alg, pair);
  Session sl(alg, pair.left), sr(alg, pair.right);
  std::uint64_t m0 = std::max(th.n3, pair.agreement_index());
  // m1: least length from which the (shared) k statistic stays past m0
  // through the horizon. Every index the code reads is then past the last
  // disagreement.
  std::uint64_t start = std::max<std::uint64_t>(th.n3, 2);
  std::uint64_t m1 = horizon + 1;
  for (std::uint64_t n = horizon; n >= start; --n) {
    CutPoints a = sl.lmk(n), b = sr.lmk(n);
    if (a.k != b.k || a.k <= static_cast<std::int64_t>(m0)) break;
    m1 = n;
    if (n == start) break;
  }
  if (m1 > horizon)
    throw ConfigError("analysis: horizon is below the code stabilization threshold");
  auto codes_agree = [&](std::uint64_t n) {
    return encode_value_Fn(alg, sl.prefix(n)) == encode_value_Fn(alg, sr.prefix(n));
  };
  for (std::uint64_t n = m1; n <= horizon; ++n) {
    ++rep.checks;
    if (!codes_agree(n)) rep.note_failure("code words differ" + at_length(n));
  }
  std::uint64_t onset = m1;
  while (onset > 0 && codes_agree(onset - 1)) --onset;
  rep.thresholds = th.to_json();
  rep.thresholds["m0"] = m0;
  rep.thresholds["m1"] = m1;
  rep.thresholds["first_code_agreement"] = onset;
  return rep;
}

PropertyReport check_cl8(const Algebra& alg, const PairSpec& pair, std::uint64_t start,
                         std::uint64_t window, std::uint64_t horizon) {
  PropertyReport rep;
  rep.claim = "cl8";
  rep.horizon = horizon;
  if (certify_relation(pair.left, pair.right) != PairRelation::divergent)
    throw ConfigError("analysis: cl8 needs a divergent pair");
  if (window == 0) window = 4 * std::max<std::uint64_t>(pair.combined_cycle_length(), 1);
  if (start + window > horizon)
    throw ConfigError("analysis: horizon is below start + window");
  Session sl(alg, pair.left), sr(alg, pair.right);
  std::vector<char> differ(horizon + 1, 0);
  for (std::uint64_t n = start; n <= horizon; ++n)
    differ[n] = !(encode_value_Fn(alg, sl.prefix(n)) == encode_value_Fn(alg, sr.prefix(n)));
  for (std::uint64_t t = start; t + window <= horizon; ++t) {
    ++rep.checks;
    bool found = false;
    for (std::uint64_t n = t; n <= t + window && !found; ++n) found = differ[n];
    if (!found)
      rep.note_failure("code words agree throughout [" + std::to_string(t) + ", " +
                       std::to_string(t + window) + "]");
  }
  rep.thresholds["start"] = start;
  rep.thresholds["window"] = window;
  return rep;
}

nlohmann::json Star0Report::to_json() const {
  const char* v = verdict == Verdict::holds          ? "holds"
                  : verdict == Verdict::violated     ? "violated"
                                                     : "truncated_holds";
  return {{"verdict", v},
          {"u_inf", u_inf},
          {"n_star", n_star},
          {"witnesses", witnesses},
          {"unknown_indices", unknown_indices}};
}

Star0Report star0_check(const Algebra& alg, const SequenceSpec& spec,
                        std::uint64_t horizon) {
  Star0Report rep;
  if (alg.exact()) {
    TailReport tail = tail_u(alg, spec);
    if (tail.violated) {
      rep.verdict = Star0Report::Verdict::violated;
      rep.witnesses = tail.witnesses;
    } else {
      rep.verdict = Star0Report::Verdict::holds;
      rep.u_inf = tail.u_inf;
      rep.n_star = tail.n_star;
    }
    return rep;
  }
  // Bounded closure is a semi-decision: a miss degrades to unknown, never to
  // a violation verdict.
  rep.verdict = Star0Report::Verdict::truncated_holds;
  rep.u_inf.push_back(0);
  rep.n_star = 1;
  for (std::uint64_t l = 0; l + 1 < horizon; ++l) {
    std::vector<Ordinal> gens;
    for (std::uint64_t k = l + 1; k <= horizon; ++k) gens.push_back(spec.entry(k));
    ClosureVerdict v = alg.closure_contains(spec.entry(l), gens);
    if (!v.in()) rep.unknown_indices.push_back(l);
  }
  return rep;
}

nlohmann::json Star1Report::to_json() const {
  return {{"descended", descended}, {"steps", steps}, {"stabilized_at", stabilized_at}};
}

namespace {

// Closures of the two natural-number algebras are intervals: downward
// closures are determined by their maximum, upward closures by their minimum.
struct ClosureDesc {
  bool empty = true;
  std::uint64_t pivot = 0;
};

ClosureDesc describe(const Algebra& alg, const std::vector<std::uint64_t>& gens) {
  ClosureDesc d;
  if (gens.empty()) return d;
  d.empty = false;
  d.pivot = alg.kind() == AlgebraKind::predecessor
                ? *std::max_element(gens.begin(), gens.end())
                : *std::min_element(gens.begin(), gens.end());
  return d;
}

bool strictly_below(const Algebra& alg, const ClosureDesc& next, const ClosureDesc& prev) {
  if (prev.empty) return false;
  if (next.empty) return true;
  return alg.kind() == AlgebraKind::predecessor ? next.pivot < prev.pivot
                                                : next.pivot > prev.pivot;
}

}  // namespace

Star1Report star1_descent(const Algebra& alg, const std::vector<Ordinal>& start_gens,
                          std::uint64_t steps, DescentRule rule) {
  if (alg.kind() == AlgebraKind::layered)
    throw ConfigError("analysis: descent probing needs a natural-number algebra");
  std::vector<std::uint64_t> gens;
  for (const Ordinal& g : start_gens) {
    if (!g.is_nat()) throw ConfigError("analysis: descent generators must be naturals");
    gens.push_back(g.as_nat());
  }
  Star1Report rep;
  rep.steps = steps;
  ClosureDesc cur = describe(alg, gens);
  for (std::uint64_t s = 0; s < steps; ++s) {
    std::vector<std::uint64_t> next;
    if (rule == DescentRule::drop_max) {
      if (cur.empty) {
        rep.stabilized_at = s;
        return rep;
      }
      if (alg.kind() == AlgebraKind::predecessor) {
        // The closure is {0..pivot}; drop its top and regenerate.
        if (cur.pivot == 0) {
          rep.stabilized_at = s;
          return rep;
        }
        next.resize(cur.pivot);
        std::iota(next.begin(), next.end(), 0);
      } else {
        auto mx = std::max_element(gens.begin(), gens.end());
        next = gens;
        next.erase(next.begin() + (mx - gens.begin()));
      }
    } else {
      next = gens;
      for (std::uint64_t& v : next) ++v;
    }
    ClosureDesc nd = describe(alg, next);
    if (!strictly_below(alg, nd, cur)) {
      rep.stabilized_at = s;
      return rep;
    }
    gens = std::move(next);
    cur = nd;
  }
  rep.descended = true;
  return rep;
}

nlohmann::json Star2Report::to_json() const {
  return {{"holds", holds}, {"reason", reason}};
}

Star2Report star2_probe(const Algebra& alg, const SequenceSpec& spec,
                        std::uint64_t cofinite_cut) {
  if (alg.kind() != AlgebraKind::predecessor)
    throw ConfigError(
        "analysis: subset-closure probing is defined for the downward-closure algebra");
  if (spec.kind != SequenceSpec::Kind::eventually_periodic)
    throw ConfigError("analysis: subset-closure probing needs an eventually periodic spec");
  std::uint64_t cyc_max = 0;
  for (const Ordinal& c : spec.cycle) {
    if (!c.is_nat()) throw ConfigError("analysis: cycle values must be naturals");
    cyc_max = std::max(cyc_max, c.as_nat());
  }
  std::uint64_t s = spec.settled_index();
  std::uint64_t stray = 0, stray_at = 0;
  for (std::uint64_t n = cofinite_cut; n < s; ++n) {
    std::uint64_t v = nat_entry(spec, n);
    if (v > cyc_max && v > stray) {
      stray = v;
      stray_at = n;
    }
  }
  Star2Report rep;
  if (stray == 0) {
    rep.holds = true;
    rep.reason = "every infinite subset of the tail meets the cycle maximum " +
                 std::to_string(cyc_max) +
                 " infinitely often, so all closures equal {0.." +
                 std::to_string(cyc_max) + "}";
  } else {
    rep.holds = false;
    rep.reason = "value " + std::to_string(stray) + " at index " +
                 std::to_string(stray_at) +
                 " occurs finitely often yet exceeds the cycle maximum " +
                 std::to_string(cyc_max) +
                 "; an infinite subset avoiding it has a smaller closure";
  }
  return rep;
}

nlohmann::json RecoveryReport::to_json() const {
  const char* st = status == Status::recovered    ? "recovered"
                   : status == Status::mismatched ? "mismatched"
                   : status == Status::not_recoverable_by_chain
                       ? "not_recoverable_by_chain"
                       : "no_chain_anchor";
  nlohmann::json steps_json = nlohmann::json::array();
  for (const Step& s : steps)
    steps_json.push_back({{"level", s.level},
                          {"arity", s.arity},
                          {"exponent", s.exponent},
                          {"var", s.var},
                          {"from", s.from},
                          {"to", s.to}});
  return {{"status", st},
          {"target", target},
          {"n_second", n_second},
          {"chain", chain},
          {"steps", steps_json},
          {"total_exponent", total_exponent},
          {"recovered", recovered.to_string()},
          {"truth", truth.to_string()}};
}

RecoveryReport decode_replay(const Algebra& alg, const SequenceSpec& spec,
                             std::uint64_t target, std::uint64_t nprime,
                             std::uint64_t search_limit) {
  if (nprime <= target)
    throw ConfigError("analysis: the anchor bound must exceed the target index");
  TailReport tail = tail_u(alg, spec);
  if (tail.violated) throw ConfigError("analysis: tail escape set is infinite");
  std::uint64_t u_max = tail.u_inf.back();
  Session ses(alg, spec);
  RecoveryReport rep;
  rep.target = target;
  std::uint64_t anchor = 0;
  for (std::uint64_t n = std::max<std::uint64_t>(nprime + 1, 3);
       n <= nprime + search_limit; ++n) {
    CutPoints cp = ses.lmk(n);
    if (cp.m > nprime && cp.k0 == u_max) {
      anchor = n;
      break;
    }
  }
  if (anchor == 0) return rep;
  rep.n_second = anchor;
  rep.chain.push_back(anchor);
  while (rep.chain.back() > target) {
    std::uint64_t cur = rep.chain.back();
    if (cur <= 1) break;
    std::uint64_t m = ses.lmk(cur).m;
    if (m >= cur) break;
    rep.chain.push_back(m);
  }
  struct Level {
    std::int64_t n0;
    std::uint64_t n1, n2;
    EncodedValue value;
  };
  std::vector<Level> levels;
  for (std::size_t i = 0; i + 1 < rep.chain.size(); ++i) {
    std::uint64_t len = rep.chain[i];
    CutPoints cp = ses.lmk(len);
    levels.push_back({cp.k, cp.l, len, encode_value(alg, cp.k, cp.l, len, ses.prefix(len))});
  }
  rep.status = RecoveryReport::Status::not_recoverable_by_chain;
  if (levels.empty()) return rep;

  // Black-box phase: only the encoded values are consulted from here on.
  // Each step composes the first low-index witness of some level, lifting the
  // tracked index up one window; the top level's fingerprint row for the
  // accumulated exponent then spells out the target's eta prefix.
  std::uint64_t cur = target, total = 0;
  for (std::size_t guard = 0; guard < kReplayGuard; ++guard) {
    if (cur >= levels[0].n1 && cur < levels[0].n2) {
      const RowRun* row = levels[0].value.find_row(1, total, 0, cur);
      if (!row) break;
      rep.recovered = row->eta;
      rep.truth = eta_prefix(alg, ses.entry(target),
                             static_cast<std::uint32_t>(levels[0].n2));
      rep.status = rep.recovered == rep.truth ? RecoveryReport::Status::recovered
                                              : RecoveryReport::Status::mismatched;
      break;
    }
    bool stepped = false;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::uint64_t lo = levels[i].n0 < 0 ? 0 : std::uint64_t(levels[i].n0);
      if (cur < lo || cur >= levels[i].n1) continue;
      auto w = levels[i].value.first_witness(cur);
      if (!w) break;
      total += w->exponent;
      rep.steps.push_back({i, w->arity, w->exponent, w->var, cur, w->window});
      cur = w->window;
      stepped = true;
      break;
    }
    if (!stepped) break;
  }
  rep.total_exponent = total;
  return rep;
}

}  // namespace kalikow
