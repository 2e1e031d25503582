#include <doctest.h>

#include <random>

#include "wittkit/witt.hpp"

using namespace wittkit;

namespace {

using WV = WittVector<Coefficient>;

WV vec(long p, const Integer& m, std::vector<long> a) {
  std::vector<Coefficient> c;
  for (long x : a) c.emplace_back(Integer(x), m);
  return WV(p, c);
}

WV random_vec(long p, const Integer& m, int n, std::mt19937_64& rng, long range = 20) {
  std::uniform_int_distribution<long> d(-range, range);
  std::vector<long> a;
  for (int i = 0; i <= n; ++i) a.push_back(d(rng));
  return vec(p, m, a);
}

WV times(long k, const WV& x) {
  WV acc = witt_zero(x.p(), x[0], x.n());
  for (long i = 0; i < k; ++i) acc = witt_add(acc, x);
  return acc;
}

}  // namespace

TEST_CASE("derived polynomials for p = 2, n = 1") {
  auto ring = witt_polynomial_ring(2);
  auto X0 = ring->var("X0"), X1 = ring->var("X1"), Y0 = ring->var("Y0"), Y1 = ring->var("Y1");
  CHECK(derive_witt_polynomial(2, 0, WittKind::Sum) == X0 + Y0);
  CHECK(derive_witt_polynomial(2, 1, WittKind::Sum) == X1 + Y1 - X0 * Y0);
  CHECK(derive_witt_polynomial(2, 1, WittKind::Product) == X0 * X0 * Y1 + X1 * Y0 * Y0 + X1 * Y1 * Integer(2));
  for (long p : {2L, 3L, 5L}) {
    auto r = witt_polynomial_ring(p);
    CHECK(derive_witt_polynomial(p, 0, WittKind::Frobenius) ==
          r->var("X0").pow(static_cast<std::uint64_t>(p)) + r->var("X1") * Integer(p));
  }
}

TEST_CASE("ghost identities hold symbolically") {
  for (auto [p, nmax] : std::vector<std::pair<long, int>>{{2, 3}, {3, 2}, {5, 1}}) {
    auto ring = witt_polynomial_ring(p);
    std::vector<PolyElement> X, Y;
    for (int i = 0; i <= kWittHardCap; ++i) {
      X.push_back(ring->var("X" + std::to_string(i)));
      Y.push_back(ring->var("Y" + std::to_string(i)));
    }
    for (int n = 0; n <= nmax; ++n) {
      std::vector<PolyElement> S, P, F;
      for (int i = 0; i <= n; ++i) {
        S.push_back(derive_witt_polynomial(p, i, WittKind::Sum));
        P.push_back(derive_witt_polynomial(p, i, WittKind::Product));
        F.push_back(derive_witt_polynomial(p, i, WittKind::Frobenius));
      }
      auto w = ghost_polynomial(p, n);
      CHECK(evaluate_witt_polynomial(w, S, {}, ring->zero()) == ghost_polynomial(p, n) + ghost_polynomial(p, n, true));
      CHECK(evaluate_witt_polynomial(w, P, {}, ring->zero()) == ghost_polynomial(p, n) * ghost_polynomial(p, n, true));
      CHECK(evaluate_witt_polynomial(w, F, {}, ring->zero()) == ghost_polynomial(p, n + 1));
    }
  }
}

TEST_CASE("negation agrees with the odd shortcut") {
  auto ring = witt_polynomial_ring(3);
  for (int n = 0; n <= 3; ++n)
    CHECK(derive_witt_polynomial(3, n, WittKind::Negation) == -ring->var("X" + std::to_string(n)));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    auto x = random_vec(2, 0, 2, rng);
    CHECK(witt_add(x, witt_neg(x)) == witt_zero(2, x[0], 2));
  }
}

TEST_CASE("W(F_2) examples") {
  const Integer two = 2;
  CHECK(witt_add(vec(2, two, {1, 0}), vec(2, two, {1, 0})) == vec(2, two, {0, 1}));
  CHECK(witt_mul(vec(2, two, {0, 1}), vec(2, two, {0, 1})) == vec(2, two, {0, 0}));
  CHECK(witt_frobenius(vec(2, two, {0, 1})) == vec(2, two, {0}));
  CHECK(witt_verschiebung(vec(2, two, {1})) == vec(2, two, {0, 1}));
  CHECK(witt_verschiebung(vec(2, two, {0})) == vec(2, two, {0, 0}));
  CHECK(witt_mul(vec(2, 0, {2, 0}), vec(2, 0, {3, 0})) == vec(2, 0, {6, 0}));
  CHECK(vec(2, two, {1, 0, 1}).str() == "W[p=2;n=2](1,0,1)");
}

TEST_CASE("additive order of 1 in W_{p^n}(F_p) is p^(n+1)") {
  for (long p : {2L, 3L}) {
    for (int n = 0; n <= 3; ++n) {
      auto one = witt_one(p, Coefficient(Integer(0), p), n);
      auto zero = witt_zero(p, one[0], n);
      long order = 0;
      auto acc = zero;
      do {
        acc = witt_add(acc, one);
        ++order;
      } while (!(acc == zero) && order < 1000);
      CHECK(order == ipow(p, static_cast<std::uint64_t>(n + 1)).get_si());
    }
  }
}

TEST_CASE("ghost map is a ring homomorphism") {
  std::mt19937_64 rng(42);
  for (const Integer m : {Integer(0), Integer(8)}) {
    for (int i = 0; i < 100; ++i) {
      auto x = random_vec(2, m, 2, rng), y = random_vec(2, m, 2, rng);
      auto gs = ghost_map(witt_add(x, y)), gp = ghost_map(witt_mul(x, y));
      auto gx = ghost_map(x), gy = ghost_map(y);
      for (int k = 0; k <= 2; ++k) {
        CHECK(gs[k] == gx[k] + gy[k]);
        CHECK(gp[k] == gx[k] * gy[k]);
      }
    }
  }
  CHECK(ghost_map(vec(2, 0, {1, 1}))[1].value() == 3);
}

TEST_CASE("from_ghost inverts the ghost map when p is invertible") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    auto x = random_vec(2, 9, 3, rng);
    CHECK(from_ghost(2, ghost_map(x)) == x);
  }
  CHECK_THROWS_AS(from_ghost(3, ghost_map(vec(3, 9, {1, 2}))), PreconditionViolation);
}

TEST_CASE("structural identities") {
  std::mt19937_64 rng(2024);
  for (long p : {2L, 3L}) {
    const Integer m = ipow(p, 6);
    for (int i = 0; i < 100; ++i) {
      auto x = random_vec(p, m, 2, rng), y = random_vec(p, m, 3, rng), z = random_vec(p, m, 3, rng);
      CHECK(witt_frobenius(witt_verschiebung(x)) == times(p, x));
      CHECK(witt_mul(witt_verschiebung(x), y) == witt_verschiebung(witt_mul(x, witt_frobenius(y))));
      CHECK(witt_frobenius(witt_add(y, z)) == witt_add(witt_frobenius(y), witt_frobenius(z)));
      CHECK(witt_frobenius(witt_mul(y, z)) == witt_mul(witt_frobenius(y), witt_frobenius(z)));
      CHECK(witt_verschiebung(witt_add(x, x)) == witt_add(witt_verschiebung(x), witt_verschiebung(x)));
    }
  }
}

TEST_CASE("char-p Frobenius shortcut") {
  std::mt19937_64 rng(5);
  for (long p : {2L, 3L}) {
    for (int n = 1; n <= 3; ++n) {
      for (int i = 0; i < 20; ++i) {
        auto x = random_vec(p, p, n, rng);
        CHECK(witt_frobenius(x) == witt_frobenius_char_p(x));
      }
    }
  }
  SUBCASE("teichmuller is multiplicative and commutes with F") {
    for (long a = 0; a < 9; ++a) {
      for (long b = 0; b < 9; ++b) {
        Coefficient ca(Integer(a), 27), cb(Integer(b), 27);
        CHECK(witt_mul(teichmuller(3, ca, 2), teichmuller(3, cb, 2)) == teichmuller(3, ca * cb, 2));
      }
      Coefficient ca(Integer(a), 27);
      CHECK(witt_frobenius(teichmuller(3, ca, 2)) == teichmuller(3, ca.pow(3), 1));
    }
  }
}

TEST_CASE("length checks and caps") {
  CHECK_THROWS_AS(witt_add(vec(2, 0, {1}), vec(2, 0, {1, 0})), LengthMismatch);
  CHECK_THROWS_AS(witt_frobenius(vec(2, 0, {1})), LengthMismatch);
  CHECK_THROWS_AS(witt_add(vec(2, 0, {1, 0, 0, 0, 0, 0}), vec(2, 0, {1, 0, 0, 0, 0, 0})), CapExceeded);
  CHECK_THROWS_AS(set_witt_index_cap(9), CapExceeded);
}
