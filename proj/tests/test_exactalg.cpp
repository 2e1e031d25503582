#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wittkit/errors.hpp"
#include "wittkit/membership.hpp"

using namespace wittkit;
using namespace testsupport;

TEST_CASE("coefficient arithmetic is normalized and exact") {
  Coefficient a(Integer(-3), 8);
  CHECK(a.value() == 5);
  CHECK((a * a).value() == 1);
  CHECK(a.inverse()->value() == 5);
  CHECK_FALSE(Coefficient(Integer(6), 8).inverse().has_value());
  CHECK(Coefficient(Integer(-1)).inverse()->value() == -1);
  CHECK_FALSE(Coefficient(Integer(2)).inverse().has_value());
}

TEST_CASE("alg_reduce examples") {
  SUBCASE("p - G vanishes in the ramified model") {
    AlgebraSpec s{2, 0, 0, 6, {{"t1"}}};
    auto free = TruncatedAlgebra::create(s);
    auto alg = free->with_p_carry(free->var("t1").pow(2));
    auto e = alg->constant(2) - alg->var("t1").pow(2);
    CHECK(e.is_zero());
  }
  SUBCASE("half exponents add") {
    auto alg = power_series(2, 3, 4, {"x"}, 1);
    std::vector<RationalTerm> raw{{1, {mpq_class(1, 2)}}};
    auto h = alg_reduce(raw, alg);
    CHECK((h * h) == alg->var("x"));
    CHECK((h * h).str() == "x");
  }
  SUBCASE("pi_1 squared is p") {
    auto alg = valuation_level(2, 4, 1);
    auto pi1 = alg->var_power("pi", 1, 1);
    CHECK(pi1.str() == "pi^(1/p)");
    CHECK((pi1 * pi1).str() == "2");
  }
  SUBCASE("denominator beyond the level") {
    auto alg = power_series(2, 3, 4, {"x"}, 1);
    std::vector<RationalTerm> raw{{1, {mpq_class(1, 4)}}};
    CHECK_THROWS_AS(alg_reduce(raw, alg), ExponentLevelMismatch);
  }
}

TEST_CASE("alg_reduce is idempotent and multiplicative") {
  std::mt19937_64 rng(7);
  std::vector<AlgebraPtr> algs{power_series(3, 4, 5, {"x", "y"}, 1), valuation_level(2, 5, 2)};
  {
    AlgebraSpec s{3, 0, 1, 6, {{"t1"}, {"t2"}}};
    auto free = TruncatedAlgebra::create(s);
    algs.push_back(free->with_p_carry(free->var("t1").pow(2) + free->var("t2").pow(3)));
  }
  for (const auto& alg : algs) {
    auto raw_alg = alg->lift();
    for (int i = 0; i < 200; ++i) {
      // Raw terms multiplied without reduction versus reduced factors.
      Terms a, b;
      const auto& basis = alg->linear_model().basis;
      std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
      std::uniform_int_distribution<long> c(-40, 40);
      for (int k = 0; k < 3; ++k) {
        a[basis[pick(rng)]] += c(rng);
        b[basis[pick(rng)]] += c(rng);
      }
      Terms prod;
      for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) prod[alg->multiply(ma, mb)] += ca * cb;
      PolyElement ra(alg, a), rb(alg, b);
      PolyElement direct(alg, prod);
      CHECK(direct == ra * rb);
      CHECK(PolyElement(alg, direct.terms()) == direct);
    }
  }
}

TEST_CASE("is_unit") {
  auto alg = power_series(3, 4, 5);
  auto x = alg->var("x");
  auto e = alg->unit() + x;
  auto inv = is_unit(e);
  REQUIRE(inv);
  PolyElement geo = alg->zero();
  for (int i = 0; i <= 5; ++i) geo = geo + (-x).pow(static_cast<std::uint64_t>(i));
  CHECK(*inv == geo);
  CHECK((e * *inv).is_one());
  CHECK_FALSE(is_unit(alg->constant(3)));
  CHECK_FALSE(is_unit(x));

  SUBCASE("non-local finite algebra") {
    AlgebraSpec s{3, 9, 0, std::nullopt, {{"z", 1, false}}};
    auto free = TruncatedAlgebra::create(s);
    auto a = free->with_rewrites({{free->var("z").pow(2), free->unit()}});
    auto z = a->var("z");
    CHECK_FALSE(a->is_local());
    auto zi = is_unit(z);
    REQUIRE(zi);
    CHECK(*zi == z);
    CHECK_FALSE(is_unit(a->unit() + z));
  }
  SUBCASE("random units invert exactly") {
    std::mt19937_64 rng(3);
    auto b = power_series(2, 5, 4, {"x", "y"}, 1);
    for (int i = 0; i < 50; ++i) {
      auto r = random_element(b, rng);
      auto u = r - b->constant(r.constant_term()) + b->constant(1 + 2 * (i % 7));
      auto ui = is_unit(u);
      REQUIRE(ui);
      CHECK((u * *ui).is_one());
    }
  }
}

TEST_CASE("exact_div_p") {
  auto alg = power_series(2, 4, 4, {"x", "y"});
  auto x = alg->var("x"), y = alg->var("y");
  auto q = exact_div_p(x * Integer(2), 1);
  CHECK(q.str() == "x");
  CHECK(q.algebra()->effective_precision() == 3);
  CHECK_THROWS_AS(exact_div_p(x, 1), InexactDivision);

  auto z3 = power_series(3, 5, 6, {"a", "b"})->lift();
  auto a = z3->var("a"), b = z3->var("b");
  auto d = exact_div_p((a + b).pow(3) - a.pow(3) - b.pow(3), 1);
  CHECK(d == a * a * b + a * b * b);

  std::mt19937_64 rng(11);
  auto m = power_series(3, 6, 4, {"x"}, 1);
  for (int i = 0; i < 50; ++i) {
    auto e = random_element(m, rng);
    auto back = exact_div_p(e * Integer(9), 2);
    CHECK(back == e.convert(back.algebra()));
  }
}

TEST_CASE("solve_linear_membership") {
  auto alg = power_series(3, 4, 4);
  auto x = alg->var("x");
  auto c1 = solve_linear_membership(x * x, {x});
  REQUIRE(c1.is_member());
  CHECK(c1.verify());
  CHECK((*c1.coefficients)[0] == x);

  auto c2 = solve_linear_membership(x * Integer(3), {alg->constant(9), x * x});
  CHECK_FALSE(c2.is_member());

  auto u4 = (alg->unit() + x) * Integer(4);
  auto c3 = solve_linear_membership(alg->constant(3), {u4 * Integer(3)});
  REQUIRE(c3.is_member());
  CHECK(c3.verify());
  // Determined only modulo the annihilator of 3.
  CHECK((((*c3.coefficients)[0] - *is_unit(u4)) * Integer(3)).is_zero());

  SUBCASE("certificates re-verify on random instances") {
    std::mt19937_64 rng(5);
    auto b = power_series(2, 3, 3, {"x", "y"}, 1);
    int members = 0;
    for (int i = 0; i < 40; ++i) {
      auto g1 = random_element(b, rng, 2), g2 = random_element(b, rng, 2);
      auto t = random_element(b, rng, 2) * g1 + random_element(b, rng, 2) * g2;
      auto c = solve_linear_membership(t, {g1, g2});
      REQUIRE(c.is_member());
      CHECK(c.verify());
      ++members;
    }
    CHECK(members == 40);
  }
}

TEST_CASE("colon_submodule") {
  auto alg = power_series(3, 3, 4);
  auto x = alg->var("x");
  CHECK(colon_submodule({alg->constant(3)}, x).empty());
  CHECK(colon_submodule({alg->constant(3)}, alg->unit()).empty());

  AlgebraSpec s{3, 3, 0, 4, {{"x"}, {"y"}}};
  auto free = TruncatedAlgebra::create(s);
  auto k = free->with_rewrites({{free->var("x") * free->var("y"), free->zero()}});
  auto col = colon_submodule({}, k->var("x"));
  REQUIRE_FALSE(col.empty());
  CHECK(in_ideal(k->var("y"), col.basis));

  SUBCASE("cross-check against membership") {
    // x1 * b in (x2) for b = y, with (x2) = (p): the colon basis is empty and
    // every candidate b in the basis outside (p) fails membership.
    auto a2 = power_series(2, 3, 3, {"x", "y"});
    auto gens = std::vector<PolyElement>{a2->constant(2)};
    auto v = a2->var("x");
    CHECK(colon_submodule(gens, v).empty());
    for (const auto& m : a2->linear_model().basis) {
      PolyElement b(a2, Terms{{m, 1}});
      if (m.degree + 1 > *a2->scaled_cap()) continue;
      CHECK_FALSE(solve_linear_membership(v * b, gens).is_member());
    }
  }
}
