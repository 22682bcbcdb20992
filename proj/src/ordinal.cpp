#include "kalikow/ordinal.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace kalikow {

Ordinal::Ordinal(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].second == 0) throw ConfigError("ordinal: zero coefficient");
    if (i + 1 < terms_.size() && terms_[i].first <= terms_[i + 1].first)
      throw ConfigError("ordinal: exponents not strictly decreasing");
  }
}

Ordinal Ordinal::nat(std::uint64_t k) {
  return k == 0 ? Ordinal{} : Ordinal{{{0, k}}};
}

Ordinal Ordinal::omega_power(std::uint32_t e, std::uint64_t c) {
  return c == 0 ? Ordinal{} : Ordinal{{{e, c}}};
}

std::uint64_t Ordinal::as_nat() const {
  if (!is_nat()) throw ConfigError("ordinal is not a natural: " + to_string());
  return terms_.empty() ? 0 : terms_.front().second;
}

std::uint64_t Ordinal::coeff(std::uint32_t e) const {
  for (const auto& [ex, c] : terms_)
    if (ex == e) return c;
  return 0;
}

std::uint32_t Ordinal::level() const {
  if (is_zero()) throw ConfigError("ord_level: 0 has no level");
  return terms_.front().first;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& o) const {
  // Lexicographic on the CNF term sequence; a missing term loses to any
  // present one, which is exactly ordinal order.
  std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = terms_[i].first <=> o.terms_[i].first; c != 0) return c;
    if (auto c = terms_[i].second <=> o.terms_[i].second; c != 0) return c;
  }
  return terms_.size() <=> o.terms_.size();
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (e == 0)
      os << c;
    else if (e == 1)
      os << "w*" << c;
    else
      os << "w^" << e << "*" << c;
  }
  return os.str();
}

Ordinal Ordinal::parse(const std::string& text) {
  std::vector<Term> terms;
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace((unsigned char)text[i])) ++i; };
  auto number = [&]() -> std::uint64_t {
    if (i >= text.size() || !std::isdigit((unsigned char)text[i]))
      throw ConfigError("ordinal parse: expected number in '" + text + "'");
    std::uint64_t v = 0;
    while (i < text.size() && std::isdigit((unsigned char)text[i]))
      v = v * 10 + (text[i++] - '0');
    return v;
  };
  skip_ws();
  if (i < text.size() && text[i] == '0' && i + 1 == text.size()) return {};
  while (true) {
    skip_ws();
    std::uint32_t e = 0;
    std::uint64_t c = 1;
    if (i < text.size() && (text[i] == 'w' || text[i] == 'W')) {
      ++i;
      e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        e = (std::uint32_t)number();
      }
      if (i < text.size() && text[i] == '*') {
        ++i;
        c = number();
      }
    } else {
      c = number();
    }
    terms.push_back({e, c});
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] != '+') throw ConfigError("ordinal parse: expected '+' in '" + text + "'");
    ++i;
  }
  return Ordinal(std::move(terms));
}

Order ord_compare(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  return c < 0 ? Order::less : c > 0 ? Order::greater : Order::equal;
}

std::uint32_t ord_level(const Ordinal& a) { return a.level(); }

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
  std::uint64_t s = x + y;
  if (s < x) throw BudgetError("cantor_pair overflow");
  unsigned __int128 t = (unsigned __int128)s * (s + 1) / 2 + y;
  if (t > ~std::uint64_t(0)) throw BudgetError("cantor_pair overflow");
  return (std::uint64_t)t;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  // s = floor((sqrt(8z+1)-1)/2), corrected for floating-point slop.
  std::uint64_t s = (std::uint64_t)((std::sqrt(8.0 * (double)z + 1.0) - 1.0) / 2.0);
  while ((unsigned __int128)s * (s + 1) / 2 > z) --s;
  while ((unsigned __int128)(s + 1) * (s + 2) / 2 <= z) ++s;
  std::uint64_t y = z - (std::uint64_t)((unsigned __int128)s * (s + 1) / 2);
  return {s - y, y};
}

OrdinalCodec::OrdinalCodec(std::uint32_t degree_bound, bool finite_identity)
    : degree_bound_(degree_bound), finite_identity_(finite_identity) {
  if (degree_bound_ < 1) throw ConfigError("codec: degree bound must be >= 1");
}

std::uint64_t OrdinalCodec::code(const Ordinal& a) const {
  if (!a.is_zero() && a.level() >= degree_bound_)
    throw ConfigError("ord_code: ordinal " + a.to_string() + " not below w^" +
                      std::to_string(degree_bound_));
  // Right-fold the coefficient vector (c_{N-1},...,c_0) through the pairing.
  std::uint64_t acc = a.coeff(0);
  for (std::uint32_t e = 1; e < degree_bound_; ++e)
    acc = cantor_pair(a.coeff(e), acc);
  return acc;
}

Ordinal OrdinalCodec::decode(std::uint64_t c) const {
  std::vector<Ordinal::Term> terms;
  std::uint64_t acc = c;
  for (std::uint32_t e = degree_bound_ - 1; e > 0; --e) {
    auto [x, rest] = cantor_unpair(acc);
    if (x) terms.push_back({e, x});
    acc = rest;
  }
  if (acc) terms.push_back({0, acc});
  return Ordinal(std::move(terms));
}

}  // namespace kalikow
