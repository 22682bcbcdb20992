#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kalikow/ordinal.hpp"

using namespace kalikow;

TEST_CASE("naturals and CNF basics") {
  CHECK(Ordinal::nat(0).is_zero());
  CHECK(Ordinal::nat(7).as_nat() == 7);
  CHECK(Ordinal::nat(7).is_nat());
  Ordinal w2 = Ordinal::omega_power(2, 3);
  CHECK_FALSE(w2.is_nat());
  CHECK(w2.level() == 2);
  CHECK(w2.coeff(2) == 3);
  CHECK(w2.coeff(1) == 0);
}

TEST_CASE("ordering") {
  Ordinal a = Ordinal::nat(5), b = Ordinal::omega_power(1), c = Ordinal::omega_power(2);
  CHECK(a < b);
  CHECK(b < c);
  CHECK(ord_compare(a, b) == Order::less);
  CHECK(ord_compare(c, b) == Order::greater);
  CHECK(ord_compare(a, Ordinal::nat(5)) == Order::equal);
  // w^2*2 + w + 4 vs w^2*2 + w*2
  Ordinal x({{2, 2}, {1, 1}, {0, 4}});
  Ordinal y({{2, 2}, {1, 2}});
  CHECK(x < y);
}

TEST_CASE("to_string / parse round trip") {
  const char* samples[] = {"0", "17", "w", "w*1 + 3", "w^2*3 + w*1 + 5", "w^3*2"};
  for (const char* s : samples) {
    Ordinal o = Ordinal::parse(s);
    CHECK(Ordinal::parse(o.to_string()) == o);
  }
  CHECK(Ordinal::parse("w^2*2 + w*1 + 4").to_string() == "w^2*2 + w*1 + 4");
}

TEST_CASE("codec round trips and finite identity") {
  OrdinalCodec codec(4, true);
  // decode then encode on a contiguous range
  for (std::uint64_t c = 0; c < 10'000; ++c) {
    Ordinal o = codec.decode(c);
    CHECK(codec.code(o) == c);
  }
  // encode then decode on sampled ordinals
  Rng rng(7);
  for (int i = 0; i < 10'000; ++i) {
    std::vector<Ordinal::Term> terms;
    for (std::uint32_t e = 4; e-- > 0;) {
      std::uint64_t coeff = rng.below(6);
      if (coeff) terms.push_back({e, coeff});
    }
    Ordinal o(std::move(terms));
    CHECK(codec.decode(codec.code(o)) == o);
  }
}

TEST_CASE("codec with degree bound 1 is the identity on naturals") {
  OrdinalCodec codec(1, true);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    CHECK(codec.code(Ordinal::nat(k)) == k);
    CHECK(codec.decode(k) == Ordinal::nat(k));
  }
}

TEST_CASE("codec round trips the spec ordinal") {
  OrdinalCodec codec(4, true);
  Ordinal o = Ordinal::parse("w^2*2 + w*1 + 4");
  CHECK(codec.decode(codec.code(o)) == o);
}

TEST_CASE("cantor pairing") {
  for (std::uint64_t x = 0; x < 50; ++x)
    for (std::uint64_t y = 0; y < 50; ++y) {
      auto [a, b] = cantor_unpair(cantor_pair(x, y));
      CHECK(a == x);
      CHECK(b == y);
    }
  CHECK_THROWS_AS(cantor_pair(~std::uint64_t(0) / 2, ~std::uint64_t(0) / 2),
                  BudgetError);
}

TEST_CASE("codec codes are distinct") {
  OrdinalCodec codec(3, true);
  std::vector<std::uint64_t> codes;
  for (std::uint64_t c2 = 0; c2 < 10; ++c2)
    for (std::uint64_t c1 = 0; c1 < 10; ++c1)
      for (std::uint64_t c0 = 0; c0 < 10; ++c0) {
        std::vector<Ordinal::Term> terms;
        if (c2) terms.push_back({2, c2});
        if (c1) terms.push_back({1, c1});
        if (c0) terms.push_back({0, c0});
        codes.push_back(codec.code(Ordinal(std::move(terms))));
      }
  std::sort(codes.begin(), codes.end());
  CHECK(std::adjacent_find(codes.begin(), codes.end()) == codes.end());
}
