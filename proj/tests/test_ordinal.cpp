#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ordtop/ordinal.hpp"

using namespace ordtop;

namespace {

std::mt19937_64 rng(0x5eed01);

Ordinal random_ordinal(int max_exp = 6, int max_coeff = 50, double keep = 0.45) {
  std::vector<Ordinal::Term> ts;
  std::uniform_int_distribution<int> coeff(1, max_coeff);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int e = max_exp; e >= 0; --e) {
    if (u(rng) < keep) ts.push_back({Nat(e), Nat(coeff(rng))});
  }
  return Ordinal::from_terms(std::move(ts));
}

Ordinal W(unsigned e, unsigned c = 1) { return Ordinal::omega_power(e, c); }
Ordinal N(unsigned n) { return Ordinal::from_nat(n); }

}  // namespace

TEST_CASE("compare basics") {
  CHECK(compare(Ordinal(), Ordinal()) == Cmp::EQ);
  // w*2+5 vs w*3 (the canonical form of w*2+w)
  Ordinal a = add(W(1, 2), N(5));
  Ordinal b = add(add(W(1, 2), N(5)), W(1));  // forces normalization through add
  CHECK(b == W(1, 3));
  CHECK(compare(a, W(1, 3)) == Cmp::LT);
  // w^3*2+5 < w^3*2+w
  CHECK(compare(add(W(3, 2), N(5)), add(W(3, 2), W(1))) == Cmp::LT);
}

TEST_CASE("add merges and absorbs") {
  CHECK(add(add(W(2, 3), W(1)), add(W(1, 2), N(5))) ==
        add(add(W(2, 3), W(1, 3)), N(5)));
  CHECK(add(W(1), W(2)) == W(2));
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_ordinal();
    CHECK(add(a, Ordinal()) == a);
  }
}

TEST_CASE("add is associative") {
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_ordinal(), b = random_ordinal(), c = random_ordinal();
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
  }
}

TEST_CASE("left_subtract examples and roundtrip") {
  CHECK(left_subtract(W(1, 2), add(W(1, 5), N(3))) == add(W(1, 3), N(3)));
  CHECK(left_subtract(W(2, 5), W(3)) == W(3));
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_ordinal();
    CHECK(left_subtract(a, a).is_zero());
    Ordinal b = random_ordinal();
    if (a > b) std::swap(a, b);
    CHECK(add(a, left_subtract(a, b)) == b);
  }
  CHECK_THROWS_AS(left_subtract(W(2), W(1)), underflow_error);
}

TEST_CASE("compare vs add monotonicity") {
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_ordinal(), b = random_ordinal(), c = random_ordinal();
    CHECK(compare(a, add(a, b)) != Cmp::GT);
    if (b < c) CHECK(add(a, b) < add(a, c));
  }
}

TEST_CASE("shift") {
  CHECK(shift(2, add(W(1, 3), N(4))) == add(W(3, 3), W(2, 4)));
  for (unsigned n = 0; n <= 10; ++n) CHECK(shift(1, W(n)) == W(n + 1));
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = random_ordinal();
    CHECK(shift(0, a) == a);
  }
}

TEST_CASE("shift distributes over add") {
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = random_ordinal(), b = random_ordinal();
    Nat k = Nat(i % 5);
    CHECK(shift(k, add(a, b)) == add(shift(k, a), shift(k, b)));
  }
}

TEST_CASE("nu is a bijection") {
  CHECK(nu(0).is_zero());
  for (Nat n = 0; n < 100000; ++n) {
    CHECK(nu_inv(nu(n)) == n);
  }
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = random_ordinal(5, 12);
    CHECK(nu(nu_inv(a)) == a);
  }
}

TEST_CASE("divmod_bounded") {
  for (int i = 0; i < 2000; ++i) {
    Ordinal g = random_ordinal(4, 9);
    if (g.is_zero()) continue;
    Ordinal b = random_ordinal(4, 9);
    if (!(b < times_omega(g))) continue;
    auto [q, r] = divmod_bounded(b, g);
    CHECK(r < g);
    // reconstruct g*q + r
    Ordinal acc;
    if (q > 0) {
      std::vector<Ordinal::Term> ts;
      ts.push_back({g.leading_exp(), g.terms().front().coeff * q});
      for (std::size_t j = 1; j < g.terms().size(); ++j) ts.push_back(g.terms()[j]);
      acc = Ordinal::from_terms(std::move(ts));
    }
    CHECK(add(acc, r) == b);
  }
}

TEST_CASE("ExtOrdinal ordering") {
  CHECK(ExtOrdinal::top() > ExtOrdinal(W(100)));
  CHECK(ExtOrdinal(W(2)) < ExtOrdinal(W(3)));
  CHECK(ExtOrdinal::top() == ExtOrdinal::top());
  CHECK(compare(ExtOrdinal::top(), ExtOrdinal(Ordinal())) == Cmp::GT);
}

TEST_CASE("string form") {
  CHECK(add(add(W(3, 2), W(1, 4)), N(7)).str() == "w^3*2+w*4+7");
  CHECK(Ordinal().str() == "0");
  CHECK(W(1).str() == "w");
}
