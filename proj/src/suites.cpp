#include "kalikow/suites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

namespace kalikow {

namespace {

constexpr int kGenAttempts = 64;

Ordinal nat(std::uint64_t v) { return Ordinal::nat(v); }

// Values are drawn from [base, base+3] with base <= 9. A narrow window keeps
// the closure-witness exponents small, which keeps every stabilization
// threshold inside the suite horizons.
std::uint64_t draw_base(Rng& rng) { return rng.below(10); }

Ordinal draw_value(Rng& rng, std::uint64_t base) { return nat(base + rng.below(4)); }

SequenceSpec gen_ep(Rng& rng, std::uint64_t base) {
  std::vector<Ordinal> head(rng.below(7));
  for (Ordinal& h : head) h = draw_value(rng, base);
  std::vector<Ordinal> cycle(1 + rng.below(4));
  for (Ordinal& c : cycle) c = draw_value(rng, base);
  SequenceSpec spec = SequenceSpec::eventually_periodic(std::move(head), std::move(cycle));
  std::uint64_t n_edits = rng.below(3);
  std::map<std::uint64_t, Ordinal> edits;
  for (std::uint64_t i = 0; i < n_edits; ++i) edits[rng.below(9)] = draw_value(rng, base);
  return spec.perturbed(edits);
}

std::vector<PropertyReport> run_cases(
    std::uint64_t count, bool parallel,
    const std::function<PropertyReport(std::uint64_t)>& fn) {
  std::vector<PropertyReport> out(count);
#if defined(KALIKOW_HAVE_OPENMP)
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      out[std::size_t(i)] = fn(std::uint64_t(i));
    return out;
  }
#else
  (void)parallel;
#endif
  for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

// Will check_cl7 accept this pair at this horizon? The m1 scan succeeds iff
// the shared k statistic already clears m0 at the horizon itself.
bool pair_feasible(const Algebra& alg, const PairSpec& pair, std::uint64_t horizon) {
  try {
    ThresholdReport th = thresholds_pair(alg, pair);
    if (std::max<std::uint64_t>(th.n3, 2) > horizon) return false;
    Session sl(alg, pair.left), sr(alg, pair.right);
    std::uint64_t m0 = std::max(th.n3, pair.agreement_index());
    CutPoints a = sl.lmk(horizon), b = sr.lmk(horizon);
    return a.k == b.k && a.k > static_cast<std::int64_t>(m0);
  } catch (const ConfigError&) {
    return false;
  } catch (const BudgetError&) {
    return false;
  }
}

PairSpec select_pair(const Algebra& alg, std::uint64_t cs, std::uint64_t horizon,
                     bool& ok) {
  Rng rng(cs);
  for (int attempt = 0; attempt < kGenAttempts; ++attempt) {
    PairSpec pair = random_almost_equal_pair(rng);
    if (pair_feasible(alg, pair, horizon)) {
      ok = true;
      return pair;
    }
  }
  ok = false;
  return PairSpec{};
}

struct HashEntry {
  std::uint64_t hash = 0;
  std::uint32_t case_id = 0;
  std::uint8_t side = 0;
  std::uint32_t n = 0;
};

// Integer codes are the canonical bytes read as a big-endian natural and the
// leading byte is always a nonzero tag, so equal codes force equal bytes.
// Bucketing by a byte hash therefore buckets by code; colliding buckets are
// recomputed in full.
PropertyReport injectivity_scan(const Algebra& alg, const std::vector<PairSpec>& pairs,
                                const std::vector<std::vector<HashEntry>>& hashes) {
  PropertyReport rep;
  rep.claim = "code-injectivity";
  std::map<std::uint64_t, std::vector<HashEntry>> buckets;
  for (const auto& per_case : hashes)
    for (const HashEntry& e : per_case) {
      buckets[e.hash].push_back(e);
      ++rep.checks;
    }
  for (const auto& [hash, entries] : buckets) {
    if (entries.size() < 2) continue;
    std::vector<std::pair<std::vector<std::uint8_t>, mpz_class>> distinct;
    for (const HashEntry& e : entries) {
      const PairSpec& p = pairs[e.case_id];
      const SequenceSpec& spec = e.side ? p.right : p.left;
      HFValue hf = encode_value_Fn(alg, spec.prefix(e.n)).to_hf();
      std::vector<std::uint8_t> bytes = hf.serialized();
      mpz_class code = hf_to_code(hf).value;
      bool seen = false;
      for (const auto&[rbytes, rcode] : distinct) {
        if (rbytes == bytes) {
          seen = true;
          if (rcode != code) rep.note_failure("equal values coded differently");
          break;
        }
        if (rcode == code) rep.note_failure("distinct values share an integer code");
      }
      if (!seen) distinct.emplace_back(std::move(bytes), std::move(code));
    }
  }
  return rep;
}

PropertyReport attempt_budget_report(const char* claim, std::uint64_t cs,
                                     std::uint64_t horizon) {
  PropertyReport rep;
  rep.claim = claim;
  rep.seed = cs;
  rep.horizon = horizon;
  rep.note_failure("no feasible case generated within the attempt budget");
  return rep;
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
  return rng.next();
}

SequenceSpec random_ep_spec(Rng& rng) { return gen_ep(rng, draw_base(rng)); }

PairSpec random_almost_equal_pair(Rng& rng) {
  std::uint64_t base = draw_base(rng);
  SequenceSpec left = gen_ep(rng, base);
  std::uint64_t n_edits = 1 + rng.below(3);
  std::map<std::uint64_t, Ordinal> edits;
  for (std::uint64_t i = 0; i < n_edits; ++i) edits[rng.below(9)] = draw_value(rng, base);
  return PairSpec::make(left, left.perturbed(edits), PairRelation::almost_equal);
}

PairSpec random_divergent_pair(Rng& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::uint64_t base = draw_base(rng);
    SequenceSpec left = gen_ep(rng, base);
    SequenceSpec right = left;
    right.cycle.assign(1 + rng.below(4), Ordinal());
    for (Ordinal& c : right.cycle) c = draw_value(rng, base);
    if (certify_relation(left, right) == PairRelation::divergent)
      return PairSpec::make(std::move(left), std::move(right), PairRelation::divergent);
  }
  // Fallback: constant cycles one apart always diverge.
  std::uint64_t base = draw_base(rng);
  SequenceSpec left = SequenceSpec::eventually_periodic({}, {nat(base)});
  SequenceSpec right = SequenceSpec::eventually_periodic({}, {nat(base + 1)});
  return PairSpec::make(std::move(left), std::move(right), PairRelation::divergent);
}

bool SuiteResult::pass() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const PropertyReport& r) { return r.pass(); });
}

std::uint64_t SuiteResult::failures() const {
  return std::uint64_t(std::count_if(reports.begin(), reports.end(),
                                     [](const PropertyReport& r) { return !r.pass(); }));
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const PropertyReport& r : reports) arr.push_back(r.to_json());
  return {{"suite", name},
          {"seed", seed},
          {"horizon", horizon},
          {"pass", pass()},
          {"failures", failures()},
          {"reports", std::move(arr)}};
}

std::string SuiteResult::csv() const {
  std::string out = PropertyReport::csv_header() + "\n";
  for (const PropertyReport& r : reports) out += r.csv_row() + "\n";
  return out;
}

SuiteResult run_cl4_suite(const Algebra& alg, const SuiteOptions& opt) {
  SuiteResult res;
  res.name = "cl4";
  res.seed = opt.seed;
  res.horizon = opt.horizon ? opt.horizon : 64;
  std::uint64_t count = opt.cases ? opt.cases : 100;
  res.reports = run_cases(count, opt.parallel, [&](std::uint64_t i) {
    std::uint64_t cs = case_seed(opt.seed, i);
    Rng rng(cs);
    for (int attempt = 0; attempt < kGenAttempts; ++attempt) {
      SequenceSpec spec = random_ep_spec(rng);
      try {
        TailReport tail = tail_u(alg, spec);
        if (tail.violated) continue;
        std::vector<std::uint64_t> grid = {tail.n_star, tail.n_star + 2, tail.n_star + 4};
        PropertyReport rep = check_cl4(alg, spec, grid, res.horizon);
        rep.seed = cs;
        return rep;
      } catch (const ConfigError&) {
      } catch (const BudgetError&) {
      }
    }
    return attempt_budget_report("cl4", cs, res.horizon);
  });
  return res;
}

SuiteResult run_cl5_suite(const Algebra& alg, const SuiteOptions& opt) {
  SuiteResult res;
  res.name = "cl5";
  res.seed = opt.seed;
  res.horizon = opt.horizon ? opt.horizon : 48;
  std::uint64_t count = opt.cases ? opt.cases : 200;
  res.reports = run_cases(count, opt.parallel, [&](std::uint64_t i) {
    std::uint64_t cs = case_seed(opt.seed, i);
    bool ok = false;
    PairSpec pair = select_pair(alg, cs, res.horizon, ok);
    if (!ok) return attempt_budget_report("cl5", cs, res.horizon);
    try {
      PropertyReport rep = check_cl5(alg, pair, res.horizon);
      rep.seed = cs;
      return rep;
    } catch (const ConfigError& e) {
      PropertyReport rep = attempt_budget_report("cl5", cs, res.horizon);
      rep.counterexamples.back() = e.what();
      return rep;
    }
  });
  return res;
}

SuiteResult run_cl7_suite(const Algebra& alg, const SuiteOptions& opt) {
  SuiteResult res;
  res.name = "cl7";
  res.seed = opt.seed;
  res.horizon = opt.horizon ? opt.horizon : 48;
  std::uint64_t count = opt.cases ? opt.cases : 200;
  std::vector<PairSpec> pairs(count);
  std::vector<std::vector<HashEntry>> hashes(count);
  res.reports = run_cases(count, opt.parallel, [&](std::uint64_t i) {
    std::uint64_t cs = case_seed(opt.seed, i);
    bool ok = false;
    PairSpec pair = select_pair(alg, cs, res.horizon, ok);
    if (!ok) return attempt_budget_report("cl7", cs, res.horizon);
    pairs[i] = pair;
    try {
      PropertyReport rep = check_cl7(alg, pair, res.horizon);
      rep.seed = cs;
      for (std::uint64_t n = 2; n <= res.horizon; ++n)
        for (int side = 0; side < 2; ++side) {
          const SequenceSpec& spec = side ? pair.right : pair.left;
          HFValue hf = encode_value_Fn(alg, spec.prefix(n)).to_hf();
          HashSink hs;
          hf.serialize(hs);
          hashes[i].push_back(
              {hs.h, std::uint32_t(i), std::uint8_t(side), std::uint32_t(n)});
        }
      return rep;
    } catch (const ConfigError& e) {
      PropertyReport rep = attempt_budget_report("cl7", cs, res.horizon);
      rep.counterexamples.back() = e.what();
      return rep;
    }
  });
  res.reports.push_back(injectivity_scan(alg, pairs, hashes));
  return res;
}

SuiteResult run_cl8_suite(const Algebra& alg, const SuiteOptions& opt) {
  SuiteResult res;
  res.name = "cl8";
  res.seed = opt.seed;
  res.horizon = opt.horizon ? opt.horizon : 64;
  std::uint64_t count = opt.cases ? opt.cases : 200;
  res.reports = run_cases(count, opt.parallel, [&](std::uint64_t i) {
    std::uint64_t cs = case_seed(opt.seed, i);
    Rng rng(cs);
    for (int attempt = 0; attempt < kGenAttempts; ++attempt) {
      PairSpec pair = random_divergent_pair(rng);
      // The members share head and edits, so codes only start to differ once
      // the cycles take over.
      std::uint64_t start =
          2 + std::max(pair.left.settled_index(), pair.right.settled_index());
      try {
        PropertyReport rep = check_cl8(alg, pair, start, 0, res.horizon);
        rep.seed = cs;
        return rep;
      } catch (const ConfigError&) {
      } catch (const BudgetError&) {
      }
    }
    return attempt_budget_report("cl8", cs, res.horizon);
  });
  return res;
}

SuiteResult run_replay_suite(const Algebra& alg, const SuiteOptions& opt) {
  SuiteResult res;
  res.name = "replay";
  res.seed = opt.seed;
  res.horizon = opt.horizon ? opt.horizon : 96;
  std::uint64_t count = opt.cases ? opt.cases : 50;
  res.reports = run_cases(count, opt.parallel, [&](std::uint64_t i) {
    std::uint64_t cs = case_seed(opt.seed, i);
    Rng rng(cs);
    for (int attempt = 0; attempt < kGenAttempts; ++attempt) {
      SequenceSpec spec = random_ep_spec(rng);
      try {
        TailReport tail = tail_u(alg, spec);
        if (tail.violated) continue;
        std::uint64_t target = 1 + rng.below(6);
        while (std::binary_search(tail.u_inf.begin(), tail.u_inf.end(), target))
          ++target;
        std::uint64_t nprime = target + 2 + rng.below(8);
        RecoveryReport r = decode_replay(alg, spec, target, nprime, res.horizon);
        if (r.status == RecoveryReport::Status::mismatched ||
            r.status == RecoveryReport::Status::recovered) {
          PropertyReport rep;
          rep.claim = "replay";
          rep.seed = cs;
          rep.horizon = res.horizon;
          rep.checks = 1;
          rep.thresholds["target"] = r.target;
          rep.thresholds["n_second"] = r.n_second;
          rep.thresholds["chain"] = r.chain;
          if (r.status == RecoveryReport::Status::mismatched)
            rep.note_failure("recovered bits differ from the entry fingerprint");
          return rep;
        }
        // Chain did not reach this target; redraw the case.
      } catch (const ConfigError&) {
      } catch (const BudgetError&) {
      }
    }
    return attempt_budget_report("replay", cs, res.horizon);
  });
  return res;
}

SuiteResult run_monotone_suite(const Algebra& alg, const SuiteOptions& opt) {
  SuiteResult res;
  res.name = "monotone";
  res.seed = opt.seed;
  res.horizon = opt.horizon ? opt.horizon : 30;
  std::uint64_t count = opt.cases ? opt.cases : 100;
  std::uint64_t len = res.horizon;
  res.reports = run_cases(count, opt.parallel, [&](std::uint64_t i) {
    std::uint64_t cs = case_seed(opt.seed, i);
    Rng rng(cs);
    SequenceSpec spec = random_ep_spec(rng);
    PropertyReport rep;
    rep.claim = "monotone";
    rep.seed = cs;
    rep.horizon = len;
    try {
      Prefix pre = spec.prefix(len);
      std::vector<std::uint64_t> stream = monotone_encode(alg, pre);
      for (std::uint64_t j : {len / 3, (2 * len) / 3, len - 1}) {
        std::vector<std::uint64_t> shorter =
            monotone_encode(alg, Prefix(pre.begin(), pre.begin() + std::ptrdiff_t(j)));
        ++rep.checks;
        if (shorter.size() > stream.size() ||
            !std::equal(shorter.begin(), shorter.end(), stream.begin()))
          rep.note_failure("prefix property fails at cut " + std::to_string(j));
      }
      std::vector<CodeWord> words = monotone_decode(stream);
      if (words.size() != len) {
        rep.note_failure("block count mismatch");
        return rep;
      }
      for (std::uint64_t j = 1; j <= len; ++j) {
        ++rep.checks;
        CodeWord direct =
            encode_Fn(alg, Prefix(pre.begin(), pre.begin() + std::ptrdiff_t(j)));
        if (!(words[j - 1] == direct))
          rep.note_failure("block " + std::to_string(j) + " decodes to a different code");
      }
    } catch (const ConfigError& e) {
      rep.note_failure(e.what());
    } catch (const BudgetError& e) {
      rep.note_failure(e.what());
    }
    return rep;
  });
  return res;
}

}  // namespace kalikow
