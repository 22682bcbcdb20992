#include "kalikow/encoder.hpp"

#include <algorithm>
#include <set>

namespace kalikow {

namespace {

void require_encoder_algebra(const Algebra& alg) {
  if (!alg.exact())
    throw ConfigError("encoder: needs an exact-closure algebra");
  if (alg.signature().has_constants())
    throw ConfigError("encoder: needs a constant-free algebra");
}

HFValue signed_atom(std::int64_t v) {
  // -1 is the only negative value that can occur; give it a non-atom shape
  // so codes stay injective across the -1 / 0 distinction.
  if (v < 0) return HFValue::set({});
  return HFValue::atom(std::uint64_t(v));
}

}  // namespace

Session::Session(const Algebra& alg, Prefix entries)
    : alg_(&alg), entries_(std::move(entries)) {
  require_encoder_algebra(alg);
}

Session::Session(const Algebra& alg, SequenceSpec spec)
    : alg_(&alg), spec_(std::move(spec)) {
  require_encoder_algebra(alg);
}

std::uint64_t Session::limit() const {
  return spec_ ? ~std::uint64_t(0) : entries_.size();
}

void Session::materialize(std::uint64_t n) {
  if (entries_.size() >= n) return;
  if (!spec_) throw ConfigError("session: prefix shorter than requested length");
  while (entries_.size() < n) entries_.push_back(spec_->entry(entries_.size()));
}

const Ordinal& Session::entry(std::uint64_t i) {
  materialize(i + 1);
  return entries_[i];
}

Prefix Session::prefix(std::uint64_t n) {
  materialize(n);
  return Prefix(entries_.begin(), entries_.begin() + n);
}

bool Session::find_f(std::uint64_t l, std::uint64_t bound) {
  if (fg_.size() <= l) fg_.resize(l + 1);
  FgSlot& slot = fg_[l];
  if (slot.f_found) return slot.f <= bound;
  if (slot.searched_to >= bound) return false;
  materialize(bound);
  const Ordinal& target = entries_[l];
  for (std::uint64_t j = std::max(slot.searched_to + 1, l + 2); j <= bound; ++j) {
    bool in;
    if (alg_->unary_shaped()) {
      // Closures of these chain algebras are unions of single-generator
      // closures, so only the generator new to this window needs testing.
      in = alg_->closure_contains(target, {&entries_[j - 1], 1}).in();
    } else {
      std::vector<Ordinal> gens(entries_.begin() + l + 1, entries_.begin() + j);
      in = alg_->closure_contains(target, gens).in();
    }
    if (in) {
      slot.f = j;
      slot.f_found = true;
      return true;
    }
  }
  slot.searched_to = bound;
  return false;
}

bool Session::f_within(std::uint64_t l, std::uint64_t bound) {
  return find_f(l, bound);
}

bool Session::in_u(std::uint64_t l, std::uint64_t n) {
  if (l >= n) throw ConfigError("session: index beyond prefix");
  if (l == 0) return true;
  return !find_f(l, n);
}

std::vector<std::uint64_t> Session::u(std::uint64_t n) {
  if (n == 0) throw ConfigError("u: needs a nonempty prefix");
  materialize(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t l = 0; l < n; ++l)
    if (in_u(l, n)) out.push_back(l);
  return out;
}

std::pair<std::uint64_t, std::uint64_t> Session::fg(std::uint64_t l,
                                                    std::uint64_t search_bound) {
  if (!find_f(l, search_bound))
    throw ConfigError("fg: index " + std::to_string(l) +
                      " has no closure witness within the window bound");
  FgSlot& slot = fg_[l];
  if (!slot.g_done) {
    std::uint32_t arity = std::uint32_t(slot.f - l - 1);
    std::vector<Ordinal> args(entries_.begin() + l + 1, entries_.begin() + slot.f);
    const Ordinal& target = entries_[l];
    bool found = false;
    for (std::uint64_t i = 0; i < kDefaultTermSearchBudget; ++i) {
      Term t = alg_->terms().term(arity, i);
      if (alg_->eval_term(t, args) == target) {
        slot.g = i;
        found = true;
        break;
      }
    }
    if (!found) throw BudgetError("fg: term search budget exhausted");
    slot.g_done = true;
  }
  return {slot.f, slot.g};
}

std::pair<std::uint64_t, std::uint64_t> Session::cutpoints(std::uint64_t n) {
  if (n < 2) throw ConfigError("cut points: need prefix length >= 2");
  materialize(n);
  std::uint64_t k1 = n - 1;
  for (std::uint64_t l = 1; l < n - 1; ++l)
    if (in_u(l, n - 1) && !in_u(l, n)) {
      k1 = l;
      break;
    }
  std::uint64_t k0 = 0;
  for (std::uint64_t l = 1; l < k1; ++l)
    if (in_u(l, n)) k0 = l;
  if (!(k0 < k1 && k1 < n)) throw ConfigError("cut points: ordering invariant broken");
  return {k0, k1};
}

CutPoints Session::lmk(std::uint64_t n) {
  if (auto it = lmk_cache_.find(n); it != lmk_cache_.end()) return it->second;
  CutPoints cp;
  auto [k0, k1] = cutpoints(n);
  cp.k0 = k0;
  cp.k1 = k1;
  cp.l = k1;
  for (std::uint64_t i = k0 + 1; i < k1; ++i)
    if (fg(i, n).second > n) {
      cp.l = i;
      break;
    }
  cp.m = std::max<std::uint64_t>(1, k0);
  for (std::uint64_t j = cp.l; j > std::max<std::uint64_t>(1, k0); --j)
    if (cutpoints(j).first == k0) {
      cp.m = j;
      break;
    }
  cp.k = cp.m <= 1 ? -1 : std::int64_t(lmk(cp.m).l);
  if (!(cp.k < std::int64_t(cp.m) && cp.m <= cp.l && cp.l <= cp.k1))
    throw ConfigError("cut points: l/m/k invariant broken");
  lmk_cache_.emplace(n, cp);
  return cp;
}

std::vector<std::uint64_t> compute_u(const Algebra& alg, const Prefix& pre) {
  Session s(alg, pre);
  return s.u(pre.size());
}

std::pair<std::uint64_t, std::uint64_t> compute_fg(const Algebra& alg, const Prefix& pre,
                                                   std::uint64_t l) {
  Session s(alg, pre);
  return s.fg(l, pre.size());
}

std::pair<std::uint64_t, std::uint64_t> compute_cutpoints(const Algebra& alg,
                                                          const Prefix& pre) {
  Session s(alg, pre);
  return s.cutpoints(pre.size());
}

CutPoints compute_lmk(const Algebra& alg, const Prefix& pre) {
  Session s(alg, pre);
  return s.lmk(pre.size());
}

std::uint64_t pool_exponent_bound(std::uint32_t arity, std::uint32_t var,
                                  std::uint64_t n2) {
  if (arity == 0 || var >= arity) throw ConfigError("pool bound: bad term shape");
  if (var > n2) return 0;
  // Base terms reach (n2 - var) / arity. With depth available, a chain of up
  // to n2 - 1 unary base links (each exponent <= n2) sits on top.
  std::uint64_t base = (n2 - var) / arity;
  if (n2 < 2) return base;
  return (n2 - 1) * n2 + base;
}

namespace {

// Advances a mixed-radix tuple over [lo, hi)^k; returns false on wrap.
bool next_tuple(std::vector<std::uint64_t>& t, std::uint64_t lo, std::uint64_t hi) {
  for (std::size_t p = t.size(); p-- > 0;) {
    if (++t[p] < hi) return true;
    t[p] = lo;
  }
  return false;
}

std::vector<PoolEntry> term_pool_generic(const Algebra& alg, std::uint64_t n1,
                                         std::uint64_t n2, std::uint64_t budget) {
  std::uint64_t w = n2 - n1;
  const TermEnumerator& en = alg.terms();
  // depth -> per-arity terms; dedup across depths by enumeration index.
  std::vector<std::set<std::uint64_t>> seen(w + 1);
  std::vector<std::vector<Term>> base(w + 1);
  std::uint64_t total = 0;
  auto admit = [&](std::uint32_t arity, const Term& t, std::vector<Term>& dest) {
    std::uint64_t idx = en.index_of(t, arity);
    if (!seen[arity].insert(idx).second) return;
    dest.push_back(t);
    if (++total > budget) throw BudgetError("term pool: size budget exceeded");
  };
  for (std::uint32_t n = alg.signature().has_constants() ? 0 : 1; n <= w; ++n)
    for (std::uint64_t l = 0; l <= n2; ++l) admit(n, en.term(n, l), base[n]);
  std::vector<std::vector<Term>> acc = base;  // all terms so far, by arity
  for (std::uint64_t depth = 2; depth <= n2; ++depth) {
    std::vector<std::vector<Term>> fresh(w + 1);
    for (std::uint32_t outer_arity = 1; outer_arity <= w; ++outer_arity) {
      for (const Term& outer : base[outer_arity]) {
        for (std::uint32_t n = 0; n <= w; ++n) {
          if (acc[n].empty()) continue;
          std::vector<std::uint64_t> pick(outer_arity, 0);
          do {
            // Revisits shallow combinations; the dedup absorbs them.
            std::vector<Term> children;
            children.reserve(outer_arity);
            for (auto p : pick) children.push_back(acc[n][p]);
            admit(n, outer.substituted(children), fresh[n]);
          } while (next_tuple(pick, 0, acc[n].size()));
        }
      }
    }
    bool any = false;
    for (std::uint32_t n = 0; n <= w; ++n) {
      for (auto& t : fresh[n]) acc[n].push_back(std::move(t));
      any = any || !fresh[n].empty();
    }
    if (!any) break;
  }
  std::vector<PoolEntry> out;
  for (std::uint32_t n = 0; n <= w; ++n)
    for (std::uint64_t idx : seen[n]) out.push_back({n, idx});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<PoolEntry> term_pool(const Algebra& alg, std::uint64_t n1, std::uint64_t n2,
                                 std::uint64_t budget) {
  if (n1 > n2) throw ConfigError("term pool: need n1 <= n2");
  std::uint64_t w = n2 - n1;
  if (!alg.unary_shaped()) return term_pool_generic(alg, n1, n2, budget);
  std::uint64_t total = 0;
  for (std::uint32_t n = 1; n <= w; ++n)
    for (std::uint32_t j = 0; j < n; ++j) {
      total += pool_exponent_bound(n, j, n2) + 1;
      if (total > budget) throw BudgetError("term pool: size budget exceeded");
    }
  std::vector<PoolEntry> out;
  out.reserve(total);
  for (std::uint32_t n = 1; n <= w; ++n)
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint64_t d = 0; d <= pool_exponent_bound(n, j, n2); ++d)
        out.push_back({n, d * n + j});
  std::sort(out.begin(), out.end());
  return out;
}

Bits eta_prefix(const Algebra& alg, const Ordinal& e, std::uint32_t len) {
  if (len > Bits::kMaxLen) throw BudgetError("eta prefix: length over cap");
  std::uint64_t code = alg.codec().code(e);
  Bits b;
  b.len = len;
  for (std::uint32_t i = 0; i < len && i < 64; ++i)
    if ((code >> i) & 1) b.set(i);
  return b;
}

EncodedValue encode_value(const Algebra& alg, std::int64_t n0, std::uint64_t n1,
                          std::uint64_t n2, const Prefix& pre,
                          std::uint64_t pool_budget) {
  require_encoder_algebra(alg);
  if (!alg.unary_shaped())
    throw ConfigError("encoder: compressed values need a single unary operation");
  if (pre.size() != n2) throw ConfigError("encoder: prefix length must equal n2");
  if (n0 < -1 || n0 > std::int64_t(n1) || n1 > n2)
    throw ConfigError("encoder: need -1 <= n0 <= n1 <= n2");
  std::uint64_t base = std::uint64_t(std::max<std::int64_t>(0, n0));
  if (n1 - base > 64) throw BudgetError("encoder: low-index window over 64");
  std::uint32_t w = std::uint32_t(n2 - n1);

  std::uint64_t total = 0;
  for (std::uint32_t n = 1; n <= w; ++n)
    for (std::uint32_t j = 0; j < n; ++j) {
      total += pool_exponent_bound(n, j, n2) + 1;
      if (total > pool_budget) throw BudgetError("term pool: size budget exceeded");
    }

  std::map<Ordinal, std::uint64_t> low_mask;
  for (std::uint64_t i = base; i < n1; ++i)
    low_mask[pre[i]] |= std::uint64_t(1) << (i - base);
  std::map<Ordinal, std::uint64_t> class_of;

  std::vector<RowGroup> groups;
  std::uint64_t expanded = 0;
  for (std::uint32_t n = 1; n <= w; ++n)
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint64_t i = n1; i < n2; ++i) {
        bool feasible = i >= n1 + j && i + (n - 1 - j) <= n2 - 1;
        std::uint64_t dmax = pool_exponent_bound(n, j, n2);
        RowGroup grp{n, j, i, {}};
        Ordinal val = pre[i];
        for (std::uint64_t d = 0;; ++d) {
          RowRun run;
          run.count = 1;
          run.eta = eta_prefix(alg, val, std::uint32_t(n2));
          if (auto it = low_mask.find(val); it != low_mask.end()) run.low_mask = it->second;
          if (feasible)
            run.value_class = class_of.emplace(val, expanded).first->second;
          else
            run.value_class = RowRun::kNoClass;
          if (!grp.runs.empty() && grp.runs.back().eta == run.eta &&
              grp.runs.back().low_mask == run.low_mask &&
              grp.runs.back().value_class == run.value_class)
            ++grp.runs.back().count;
          else
            grp.runs.push_back(run);
          ++expanded;
          if (d == dmax) break;
          Ordinal next = alg.eval_op(0, {&val, 1});
          if (next == val) {
            // Fixed point: every remaining exponent repeats this row.
            std::uint64_t remaining = dmax - d;
            grp.runs.back().count += remaining;
            expanded += remaining;
            break;
          }
          val = std::move(next);
        }
        groups.push_back(std::move(grp));
      }
  return EncodedValue(n0, n1, n2, std::move(groups));
}

const RowRun* EncodedValue::find_row(std::uint32_t arity, std::uint64_t d,
                                     std::uint32_t var, std::uint64_t window) const {
  if (arity == 0 || var >= arity || window < n1_ || window >= n2_) return nullptr;
  std::uint64_t w = n2_ - n1_;
  if (arity > w) return nullptr;
  std::uint64_t gi =
      (std::uint64_t(arity) * (arity - 1) / 2 + var) * w + (window - n1_);
  const RowGroup& grp = groups_[gi];
  std::uint64_t seen = 0;
  for (const RowRun& run : grp.runs) {
    seen += run.count;
    if (d < seen) return &run;
  }
  return nullptr;
}

std::optional<EncodedValue::Witness> EncodedValue::first_witness(std::uint64_t i) const {
  std::uint64_t base = std::uint64_t(std::max<std::int64_t>(0, n0_));
  if (i < base || i >= n1_) return std::nullopt;
  std::uint64_t bit = std::uint64_t(1) << (i - base);
  for (const RowGroup& grp : groups_) {
    std::uint64_t d = 0;
    for (const RowRun& run : grp.runs) {
      if (run.low_mask & bit)
        return Witness{grp.arity, d, grp.var, grp.window};
      d += run.count;
    }
  }
  return std::nullopt;
}

void EncodedValue::serialize(ByteSink& sink) const {
  sink.put_varint(std::uint64_t(n0_ + 1));
  sink.put_varint(n1_);
  sink.put_varint(n2_);
  sink.put_varint(groups_.size());
  for (const RowGroup& grp : groups_) {
    sink.put_varint(grp.arity);
    sink.put_varint(grp.var);
    sink.put_varint(grp.window);
    sink.put_varint(grp.runs.size());
    for (const RowRun& run : grp.runs) {
      sink.put_varint(run.count);
      sink.put_varint(run.eta.len);
      for (std::uint32_t b = 0; b < run.eta.len; b += 8) {
        std::uint8_t byte = 0;
        for (std::uint32_t o = 0; o < 8 && b + o < run.eta.len; ++o)
          byte |= std::uint8_t(run.eta.get(b + o)) << o;
        sink.put_u8(byte);
      }
      sink.put_varint(run.low_mask);
      sink.put_varint(run.value_class);
    }
  }
}

HFValue EncodedValue::to_hf() const {
  std::vector<HFValue> gs;
  gs.reserve(groups_.size());
  for (const RowGroup& grp : groups_) {
    std::vector<HFValue> rs;
    rs.reserve(grp.runs.size());
    for (const RowRun& run : grp.runs)
      rs.push_back(HFValue::tuple({HFValue::atom(run.count), HFValue::bits(run.eta),
                                   HFValue::atom(run.low_mask),
                                   run.value_class == RowRun::kNoClass
                                       ? HFValue::set({})
                                       : HFValue::atom(run.value_class)}));
    gs.push_back(HFValue::tuple({HFValue::atom(grp.arity), HFValue::atom(grp.var),
                                 HFValue::atom(grp.window),
                                 HFValue::tuple(std::move(rs))}));
  }
  return HFValue::tuple({signed_atom(n0_), HFValue::atom(n1_), HFValue::atom(n2_),
                         HFValue::tuple(std::move(gs))});
}

nlohmann::json EncodedValue::to_json() const {
  nlohmann::json gs = nlohmann::json::array();
  for (const RowGroup& grp : groups_) {
    nlohmann::json rs = nlohmann::json::array();
    for (const RowRun& run : grp.runs) {
      nlohmann::json r{{"count", run.count},
                       {"eta", run.eta.to_string()},
                       {"mask", run.low_mask}};
      if (run.value_class == RowRun::kNoClass)
        r["class"] = nullptr;
      else
        r["class"] = run.value_class;
      rs.push_back(std::move(r));
    }
    gs.push_back(nlohmann::json{{"arity", grp.arity},
                                {"var", grp.var},
                                {"window", grp.window},
                                {"runs", std::move(rs)}});
  }
  return {{"n0", n0_}, {"n1", n1_}, {"n2", n2_}, {"groups", std::move(gs)}};
}

HFValue encode_F0(const Algebra& alg, std::int64_t n0, std::uint64_t n1,
                  std::uint64_t n2, const Prefix& pre, std::uint64_t budget) {
  require_encoder_algebra(alg);
  if (pre.size() != n2) throw ConfigError("encoder: prefix length must equal n2");
  if (n0 < -1 || n0 > std::int64_t(n1) || n1 > n2)
    throw ConfigError("encoder: need -1 <= n0 <= n1 <= n2");
  std::uint64_t base = std::uint64_t(std::max<std::int64_t>(0, n0));
  std::uint64_t w = n2 - n1;
  auto pool = term_pool(alg, n1, n2, budget);

  // Application count guard: each arity-n term evaluates on w^n tuples.
  std::uint64_t apps = 0;
  for (const auto& pe : pool) {
    std::uint64_t tuples = 1;
    for (std::uint32_t a = 0; a < pe.arity; ++a) {
      tuples *= w;
      if (tuples > budget) throw BudgetError("encoder: clause expansion over budget");
    }
    apps += tuples;
    if (apps > budget) throw BudgetError("encoder: clause expansion over budget");
  }

  std::vector<HFValue> bset, cset, dset;
  // (term header, increasing index tuple, value) for the equality clause.
  std::vector<std::tuple<HFValue, HFValue, Ordinal>> incr;
  for (const auto& pe : pool) {
    bset.push_back(HFValue::tuple({HFValue::atom(pe.arity), HFValue::atom(pe.index)}));
    if (pe.arity == 0 || w == 0) continue;
    Term t = alg.terms().term(pe.arity, pe.index);
    std::vector<std::uint64_t> idx(pe.arity, n1);
    do {
      std::vector<Ordinal> args;
      std::vector<HFValue> iatoms;
      args.reserve(pe.arity);
      for (auto i : idx) {
        args.push_back(pre[i]);
        iatoms.push_back(HFValue::atom(i));
      }
      Ordinal val = alg.eval_term(t, args);
      HFValue ituple = HFValue::tuple(std::move(iatoms));
      cset.push_back(HFValue::tuple({HFValue::bits(eta_prefix(alg, val, std::uint32_t(n2))),
                                     HFValue::atom(pe.arity), HFValue::atom(pe.index),
                                     ituple}));
      for (std::uint64_t i = base; i < n1; ++i)
        if (pre[i] == val)
          dset.push_back(HFValue::tuple({HFValue::atom(pe.arity), HFValue::atom(pe.index),
                                         ituple, HFValue::atom(i)}));
      bool increasing = true;
      for (std::size_t p = 1; p < idx.size(); ++p)
        if (idx[p] <= idx[p - 1]) increasing = false;
      if (increasing) {
        incr.emplace_back(
            HFValue::tuple({HFValue::atom(pe.arity), HFValue::atom(pe.index)}), ituple,
            std::move(val));
        if (incr.size() * incr.size() > budget)
          throw BudgetError("encoder: equality clause over budget");
      }
    } while (next_tuple(idx, n1, n2));
  }
  std::vector<HFValue> eset;
  for (const auto& [h1, i1, v1] : incr)
    for (const auto& [h2, i2, v2] : incr)
      if (v1 == v2)
        eset.push_back(HFValue::tuple({h1.items()[0], h1.items()[1], h2.items()[0],
                                       h2.items()[1], i1, i2}));
  return HFValue::tuple({HFValue::tuple({signed_atom(n0), HFValue::atom(n1),
                                         HFValue::atom(n2)}),
                         HFValue::set(std::move(bset)), HFValue::set(std::move(cset)),
                         HFValue::set(std::move(dset)), HFValue::set(std::move(eset))});
}

EncodedValue encode_value_Fn(const Algebra& alg, const Prefix& pre,
                             std::uint64_t pool_budget) {
  if (pre.size() < 2) return EncodedValue();
  CutPoints cp = compute_lmk(alg, pre);
  return encode_value(alg, cp.k, cp.l, pre.size(), pre, pool_budget);
}

CodeWord encode_Fn(const Algebra& alg, const Prefix& pre, std::uint64_t pool_budget) {
  if (pre.size() < 2) return CodeWord{0};
  return hf_to_code(encode_value_Fn(alg, pre, pool_budget).to_hf());
}

std::vector<std::uint64_t> monotone_encode(const Algebra& alg, const Prefix& pre,
                                           std::uint64_t pool_budget) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t j = 1; j <= pre.size(); ++j) {
    CodeWord cw = encode_Fn(alg, Prefix(pre.begin(), pre.begin() + j), pool_budget);
    if (cw.value == 0) {
      out.push_back(0);
      continue;
    }
    std::size_t count = 0;
    std::vector<std::uint32_t> digits((mpz_sizeinbase(cw.value.get_mpz_t(), 2) + 31) / 32);
    mpz_export(digits.data(), &count, -1, 4, 0, 0, cw.value.get_mpz_t());
    out.push_back(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(digits[i]);
  }
  return out;
}

std::vector<CodeWord> monotone_decode(const std::vector<std::uint64_t>& stream) {
  std::vector<CodeWord> out;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    std::uint64_t count = stream[pos++];
    if (pos + count > stream.size())
      throw ConfigError("monotone stream: truncated block");
    std::vector<std::uint32_t> digits;
    digits.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      if (stream[pos] > 0xffffffffULL)
        throw ConfigError("monotone stream: digit out of range");
      digits.push_back(std::uint32_t(stream[pos++]));
    }
    CodeWord cw;
    if (count)
      mpz_import(cw.value.get_mpz_t(), digits.size(), -1, 4, 0, 0, digits.data());
    out.push_back(std::move(cw));
  }
  return out;
}

}  // namespace kalikow
