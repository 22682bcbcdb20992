#include "kalikow/term.hpp"

#include <algorithm>
#include <cctype>

namespace kalikow {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s < a) throw BudgetError("term enumeration: count overflow");
  return s;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a && b > ~std::uint64_t(0) / a) throw BudgetError("term enumeration: count overflow");
  return a * b;
}

constexpr std::uint64_t kMaxTermSize = 1 << 20;
constexpr std::uint64_t kMaxCompositions = 1 << 20;

// All compositions of m into k positive parts, lexicographic.
void compositions(std::uint64_t m, std::uint32_t k, std::vector<std::uint64_t>& cur,
                  std::vector<std::vector<std::uint64_t>>& out) {
  if (k == 0) {
    if (m == 0) {
      out.push_back(cur);
      if (out.size() > kMaxCompositions) throw BudgetError("term enumeration: composition blowup");
    }
    return;
  }
  for (std::uint64_t s1 = 1; s1 + (k - 1) <= m; ++s1) {
    cur.push_back(s1);
    compositions(m - s1, k - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::uint32_t Signature::op_index(const std::string& name) const {
  for (std::uint32_t i = 0; i < ops.size(); ++i)
    if (ops[i].name == name) return i;
  throw ConfigError("signature: unknown operation '" + name + "'");
}

std::uint64_t Term::node_count() const {
  std::uint64_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::uint64_t Term::var_span() const {
  if (kind == Kind::var) return index + 1;
  std::uint64_t m = 0;
  for (const auto& c : children) m = std::max(m, c.var_span());
  return m;
}

std::vector<std::uint32_t> Term::used_vars() const {
  std::vector<std::uint32_t> out;
  if (kind == Kind::var) {
    out.push_back((std::uint32_t)index);
  } else {
    for (const auto& c : children)
      for (auto v : c.used_vars()) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Term::to_string(const Signature& sig) const {
  switch (kind) {
    case Kind::var:
      return "x" + std::to_string(index);
    case Kind::constant:
      return "c" + std::to_string(index);
    case Kind::app: {
      std::string s = sig.ops.at(index).name + "(";
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) s += ",";
        s += children[i].to_string(sig);
      }
      return s + ")";
    }
  }
  throw ConfigError("term: bad kind");
}

namespace {

Term parse_impl(const std::string& s, std::size_t& i, const Signature& sig) {
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  if (i >= s.size()) throw ConfigError("term parse: unexpected end in '" + s + "'");
  if ((s[i] == 'x' || s[i] == 'c') && i + 1 < s.size() && std::isdigit((unsigned char)s[i + 1])) {
    bool var = s[i] == 'x';
    ++i;
    std::uint64_t v = 0;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) v = v * 10 + (s[i++] - '0');
    return var ? Term::var(v) : Term::constant(v);
  }
  std::string name;
  while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) name += s[i++];
  std::uint32_t op = sig.op_index(name);
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  if (i >= s.size() || s[i] != '(') throw ConfigError("term parse: expected '(' in '" + s + "'");
  ++i;
  std::vector<Term> children;
  for (std::uint32_t a = 0; a < sig.ops[op].arity; ++a) {
    if (a) {
      while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
      if (i >= s.size() || s[i] != ',') throw ConfigError("term parse: expected ',' in '" + s + "'");
      ++i;
    }
    children.push_back(parse_impl(s, i, sig));
  }
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  if (i >= s.size() || s[i] != ')') throw ConfigError("term parse: expected ')' in '" + s + "'");
  ++i;
  return Term::app(op, std::move(children));
}

}  // namespace

Term Term::parse(const std::string& text, const Signature& sig) {
  std::size_t i = 0;
  Term t = parse_impl(text, i, sig);
  while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
  if (i != text.size()) throw ConfigError("term parse: trailing input in '" + text + "'");
  return t;
}

Term Term::substituted(const std::vector<Term>& repl) const {
  switch (kind) {
    case Kind::var:
      if (index >= repl.size()) throw ConfigError("substitution: variable out of range");
      return repl[index];
    case Kind::constant:
      return *this;
    case Kind::app: {
      std::vector<Term> ch;
      ch.reserve(children.size());
      for (const auto& c : children) ch.push_back(c.substituted(repl));
      return Term::app(index, std::move(ch));
    }
  }
  throw ConfigError("term: bad kind");
}

TermEnumerator::TermEnumerator(Signature sig) : sig_(std::move(sig)) {
  if (sig_.constant_count == Signature::kInfiniteConstants)
    throw ConfigError("term enumeration needs a finite constant family");
  for (const auto& op : sig_.ops)
    if (op.arity == 0) throw ConfigError("term enumeration: use constants, not 0-ary ops");
}

std::uint64_t TermEnumerator::count(std::uint32_t arity, std::uint64_t size) const {
  if (size == 0) return 0;
  if (count_memo_.size() <= arity) count_memo_.resize(arity + 1);
  auto& memo = count_memo_[arity];
  if (memo.size() > size) return memo[size];
  if (memo.empty()) memo.push_back(0);  // size 0
  for (std::uint64_t s = memo.size(); s <= size; ++s) {
    std::uint64_t total = 0;
    if (s == 1) {
      total = checked_add(arity, sig_.constant_count);
    } else {
      for (const auto& op : sig_.ops) {
        // Tuples of op.arity children with node counts summing to s-1,
        // T(m,k) = sum_{s1} count(s1) * T(m-s1, k-1), rolled over k.
        std::vector<std::uint64_t> t(s, 0);
        t[0] = 1;
        for (std::uint32_t j = 0; j < op.arity; ++j) {
          std::vector<std::uint64_t> next(s, 0);
          for (std::uint64_t m = 0; m < s; ++m) {
            if (!t[m]) continue;
            for (std::uint64_t s1 = 1; m + s1 < s; ++s1)
              next[m + s1] = checked_add(next[m + s1], checked_mul(t[m], memo[s1]));
          }
          t = std::move(next);
        }
        total = checked_add(total, t[s - 1]);
      }
    }
    memo.push_back(total);
  }
  return memo[size];
}

std::uint64_t TermEnumerator::count_below(std::uint32_t arity, std::uint64_t size) const {
  if (size <= 1) return 0;
  count(arity, size - 1);
  if (cum_memo_.size() <= arity) cum_memo_.resize(arity + 1);
  auto& cum = cum_memo_[arity];
  if (cum.empty()) cum.assign(2, 0);  // sizes 0 and "below 1"
  for (std::uint64_t s = cum.size(); s <= size; ++s)
    cum.push_back(checked_add(cum.back(), count_memo_[arity][s - 1]));
  return cum[size];
}

namespace {

bool single_unary_shape(const Signature& sig) {
  return sig.ops.size() == 1 && sig.ops[0].arity == 1 && sig.constant_count == 0;
}

}  // namespace

Term TermEnumerator::term(std::uint32_t arity, std::uint64_t index) const {
  if (arity == 0 && !sig_.has_constants())
    throw ConfigError("no 0-place terms: signature has no constants");
  if (single_unary_shape(sig_)) {
    // chains op^d(x_j) enumerate at index d*arity + j
    std::uint64_t d = index / arity;
    if (d > kMaxTermSize) throw BudgetError("term enumeration: index out of range");
    Term t = Term::var(index % arity);
    for (std::uint64_t i = 0; i < d; ++i) {
      std::vector<Term> ch;
      ch.push_back(std::move(t));  // brace-init would deep-copy the chain
      t = Term::app(0, std::move(ch));
    }
    return t;
  }
  std::uint64_t size = 1, rank = index;
  while (true) {
    std::uint64_t c = count(arity, size);
    if (rank < c) break;
    rank -= c;
    if (++size > kMaxTermSize) throw BudgetError("term enumeration: index out of range");
  }
  return unrank(arity, size, rank);
}

Term TermEnumerator::unrank(std::uint32_t arity, std::uint64_t size,
                            std::uint64_t rank) const {
  if (size == 1) {
    if (rank < arity) return Term::var(rank);
    return Term::constant(rank - arity);
  }
  for (std::uint32_t opi = 0; opi < sig_.ops.size(); ++opi) {
    std::uint32_t k = sig_.ops[opi].arity;
    std::vector<std::uint64_t> cur;
    std::vector<std::vector<std::uint64_t>> comps;
    compositions(size - 1, k, cur, comps);
    for (const auto& sizes : comps) {
      std::uint64_t block = 1;
      for (auto s : sizes) block = checked_mul(block, count(arity, s));
      if (rank < block) {
        // Mixed-radix tuple: first child is the most significant digit.
        std::vector<Term> ch(k);
        for (std::uint32_t j = 0; j < k; ++j) {
          std::uint64_t radix_rest = 1;
          for (std::uint32_t j2 = j + 1; j2 < k; ++j2)
            radix_rest = checked_mul(radix_rest, count(arity, sizes[j2]));
          std::uint64_t r = rank / radix_rest;
          rank %= radix_rest;
          ch[j] = unrank(arity, sizes[j], r);
        }
        return Term::app(opi, std::move(ch));
      }
      rank -= block;
    }
  }
  throw ConfigError("term enumeration: internal unrank failure");
}

std::uint64_t TermEnumerator::index_of(const Term& t, std::uint32_t arity) const {
  if (single_unary_shape(sig_)) {
    std::uint64_t d = 0;
    const Term* cur = &t;
    while (cur->kind == Term::Kind::app) {
      if (cur->index != 0 || cur->children.size() != 1)
        throw ConfigError("term_index: term is not over this signature");
      ++d;
      cur = &cur->children[0];
    }
    if (cur->kind != Term::Kind::var || cur->index >= arity)
      throw ConfigError("term_index: term uses variables beyond arity " +
                        std::to_string(arity));
    return d * arity + cur->index;
  }
  if (t.var_span() > arity)
    throw ConfigError("term_index: term uses variables beyond arity " + std::to_string(arity));
  std::uint64_t size = 0;
  std::uint64_t rank = rank_of(t, arity, size);
  return checked_add(count_below(arity, size), rank);
}

std::uint64_t TermEnumerator::rank_of(const Term& t, std::uint32_t arity,
                                      std::uint64_t& size_out) const {
  if (t.kind != Term::Kind::app) {
    size_out = 1;
    if (t.kind == Term::Kind::var) return t.index;
    if (t.index >= sig_.constant_count)
      throw ConfigError("term_index: constant index out of range");
    return arity + t.index;
  }
  std::uint32_t k = sig_.ops.at(t.index).arity;
  std::vector<std::uint64_t> child_ranks(k), target_sizes(k);
  std::uint64_t size = 1;
  for (std::uint32_t j = 0; j < k; ++j) {
    child_ranks[j] = rank_of(t.children[j], arity, target_sizes[j]);
    size = checked_add(size, target_sizes[j]);
  }
  size_out = size;

  std::uint64_t rank = 0;
  for (std::uint32_t opi = 0; opi < t.index; ++opi) {
    std::vector<std::uint64_t> cur;
    std::vector<std::vector<std::uint64_t>> comps;
    compositions(size - 1, sig_.ops[opi].arity, cur, comps);
    for (const auto& sizes : comps) {
      std::uint64_t block = 1;
      for (auto s : sizes) block = checked_mul(block, count(arity, s));
      rank = checked_add(rank, block);
    }
  }
  std::vector<std::uint64_t> cur;
  std::vector<std::vector<std::uint64_t>> comps;
  compositions(size - 1, k, cur, comps);
  bool found = false;
  for (const auto& sizes : comps) {
    if (sizes == target_sizes) {
      found = true;
      break;
    }
    std::uint64_t block = 1;
    for (auto s : sizes) block = checked_mul(block, count(arity, s));
    rank = checked_add(rank, block);
  }
  if (!found) throw ConfigError("term_index: internal composition failure");
  std::uint64_t tuple = 0;
  for (std::uint32_t j = 0; j < k; ++j) {
    tuple = checked_mul(tuple, count(arity, target_sizes[j]));
    tuple = checked_add(tuple, child_ranks[j]);
  }
  return checked_add(rank, tuple);
}

}  // namespace kalikow
