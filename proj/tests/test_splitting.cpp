#include <doctest.h>

#include "support.hpp"
#include "wittkit/errors.hpp"
#include "wittkit/polyparse.hpp"
#include "wittkit/splitting.hpp"

using namespace wittkit;
using namespace testsupport;

namespace {

// R = Z/3^6[[x]] truncated at degree 6, S = R[z]/(z^2 - 3(1+x)).
struct Main {
  AlgebraPtr R = power_series(3, 6, 6);
  FiniteAlgebraPresentation P =
      monogenic_extension(R, {parse_polynomial("-3*(1+x)", R), R->zero(), R->unit()});
};

}  // namespace

TEST_CASE("etale_away_from_p") {
  Main m;
  CHECK(check_multiplication_table(m.P));
  auto rep = etale_away_from_p(m.P, 5);
  CHECK(rep.verdict == EtaleVerdict::Etale);
  CHECK(rep.a == 1);
  CHECK(rep.disc == parse_polynomial("12 + 12*x", m.R));
  REQUIRE(rep.certificate);
  CHECK(rep.certificate->verify());

  auto x = m.R->var("x");
  auto bad = monogenic_extension(m.R, {-x, m.R->zero(), m.R->unit()});
  auto r2 = etale_away_from_p(bad, 5);
  CHECK(r2.verdict == EtaleVerdict::NotEtaleAwayFromP);
  CHECK(r2.searched_up_to == 5);
  auto one = monogenic_extension(m.R, {-m.R->unit(), m.R->zero(), m.R->unit()});
  auto r3 = etale_away_from_p(one, 5);
  CHECK(r3.verdict == EtaleVerdict::Etale);
  CHECK(r3.a == 0);

  CHECK_THROWS_AS(monogenic_extension(m.R, {x, m.R->constant(2)}), NotMonic);
}

TEST_CASE("discriminant closed forms") {
  AlgebraSpec s{5, 0, 0, 6, {{"a"}, {"b"}, {"c"}}};
  auto A = TruncatedAlgebra::create(s);
  auto a = A->var("a"), b = A->var("b"), c = A->var("c");
  CHECK(discriminant({c, b, A->unit()}) == b * b - c * Integer(4));
  CHECK(discriminant({b, a, A->zero(), A->unit()}) == -(a.pow(3) * Integer(4)) - b * b * Integer(27));
  // Res((z-a)(z-b), z-c) = (c-a)(c-b) up to sign (-1)^{deg f deg g}.
  CHECK(sylvester_resultant({a * b, -(a + b), A->unit()}, {-c, A->unit()}) == (c - a) * (c - b));
}

TEST_CASE("monomial_check") {
  Main m;
  auto x = m.R->var("x");
  const auto p = m.R->constant(3);
  auto res = monomial_check(m.P, {p, x}, 3);
  REQUIRE(res.size() == 3);
  for (const auto& [k, c] : res) {
    CHECK_FALSE(c.member());
    // S = R + Rz and the ideal is extended from R: membership reduces to R.
    std::vector<PolyElement> I{p.pow(static_cast<std::uint64_t>(k) + 1), x.pow(static_cast<std::uint64_t>(k) + 1)};
    CHECK_FALSE(in_ideal((p * x).pow(static_cast<std::uint64_t>(k)), I));
  }

  // S = R: a regular ring has the monomial property (N, D >= k_max + 2).
  auto same = presentation_from_map(m.R, m.R, {x});
  for (const auto& [k, c] : monomial_check(same, {p, x}, 4)) CHECK_FALSE(c.member());

  // p = 0 in S: (p x)^k vanishes.
  auto Fp = power_series(3, 1, 6);
  auto degenerate = presentation_from_map(m.R, Fp, {Fp->var("x")});
  for (const auto& [k, c] : monomial_check(degenerate, {p, x}, 3)) {
    CHECK(c.member());
    CHECK(c.certificate.verify());
  }
  CHECK_FALSE(retraction_solver(degenerate));
}

TEST_CASE("retraction_solver") {
  Main m;
  auto phi = retraction_solver(m.P);
  REQUIRE(phi);
  CHECK(phi->verified);
  CHECK(phi->apply(m.P, m.P.one()) == m.R->unit());
  auto x = m.R->var("x");
  for (int j = 0; j <= 6; ++j) CHECK(phi->apply(m.P, m.P.image(x.pow(static_cast<std::uint64_t>(j)))) == x.pow(static_cast<std::uint64_t>(j)));

  // The projection a + bz -> a is a retraction too.
  const auto z = m.P.S->var("z");
  RetractionMap proj;
  for (const auto& mono : m.P.S->linear_model().basis) {
    const PolyElement b(m.P.S, Terms{{mono, 1}});
    proj.values.push_back(mono.exps[1] == 0 ? b.convert(m.R) : m.R->zero());
  }
  for (const auto& mono : m.P.S->linear_model().basis) {
    const PolyElement b(m.P.S, Terms{{mono, 1}});
    CHECK(proj.apply(m.P, m.P.image(x) * b) == x * proj.apply(m.P, b));
  }
  CHECK(proj.apply(m.P, z) == m.R->zero());

  // Free S = R[z]/(z^2).
  auto free = monogenic_extension(m.R, {m.R->zero(), m.R->zero(), m.R->unit()});
  auto pf = retraction_solver(free);
  REQUIRE(pf);
  CHECK(pf->verified);

  // Cusp: R = F_3[u,v]/(v^2 - u^3) -> F_3[t], u -> t^2, v -> t^3. phi(t) = a
  // would need u a = v in R, and v is not in (u).
  AlgebraSpec rs{3, 3, 0, 9, {{"u", 2, true}, {"v", 3, true}}};
  auto Rf = TruncatedAlgebra::create(rs);
  auto Rc = Rf->with_rewrites({{Rf->var("v").pow(2), Rf->var("u").pow(3)}});
  auto T = power_series(3, 1, 9, {"t"});
  auto cusp = presentation_from_map(Rc, T, {T->var("t").pow(2), T->var("t").pow(3)});
  CHECK(check_multiplication_table(cusp));
  CHECK_FALSE(in_ideal(Rc->var("v"), {Rc->var("u")}));
  CHECK_FALSE(retraction_solver(cusp));
  CHECK_THROWS_AS(monomial_check(cusp, {Rc->var("u"), Rc->var("v")}, 1), PreconditionViolation);
}

TEST_CASE("etale extensions of a regular base pass the joint check") {
  for (long p : {3L, 5L}) {
    auto R = power_series(p, 4, 5);
    for (const char* unit : {"1", "1+x", "2+x^2", "1-x+x^3"}) {
      auto u = parse_polynomial(unit, R);
      auto P = monogenic_extension(R, {-(u * R->constant(p)), R->zero(), R->unit()});
      auto suite = split_suite(P, {R->constant(p), R->var("x")}, 2, 3);
      CHECK(suite.etale.verdict == EtaleVerdict::Etale);
      CHECK(suite.consistent());
      CHECK(suite.split.retraction);
    }
  }
}
