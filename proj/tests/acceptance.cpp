// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support.hpp"
#include "wittkit/almost.hpp"
#include "wittkit/errors.hpp"
#include "wittkit/modifications.hpp"
#include "wittkit/polyparse.hpp"
#include "wittkit/ringspec.hpp"
#include "wittkit/runner.hpp"
#include "wittkit/splitting.hpp"
#include "wittkit/towers.hpp"
#include "wittkit/witt.hpp"
#include "wittkit/witt_checks.hpp"

using namespace wittkit;
using testsupport::power_series;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

TowerSpec tower(TowerKind kind, long p, std::int64_t D, const std::string& G = "", int N = 4) {
  TowerSpec s;
  s.kind = kind;
  s.p = p;
  s.d = kind == TowerKind::Valuation ? 1 : 2;
  s.G = G;
  s.N = N;
  s.D = D;
  return s;
}

Outcome criterion1() {
  Outcome o;
  const auto start = Clock::now();
  for (auto [p, n_max] : {std::pair{2L, 3}, {3L, 3}, {5L, 2}})
    for (const auto& r : derive_all(p, n_max))
      o.require(r.integral, "not integral: p=" + std::to_string(p) + " " + to_string(r.kind) + "_" + std::to_string(r.n));
  const auto R = witt_polynomial_ring(2);
  const auto X0 = R->var("X0"), X1 = R->var("X1"), Y0 = R->var("Y0"), Y1 = R->var("Y1");
  o.require(derive_witt_polynomial(2, 1, WittKind::Sum) == X1 + Y1 - X0 * Y0, "S_1 closed form");
  o.require(derive_witt_polynomial(2, 1, WittKind::Product) == X0 * X0 * Y1 + X1 * Y0 * Y0 + X1 * Y1 * Integer(2),
            "P_1 closed form");
  const double t = seconds_since(start);
  o.require(t < 30, "runtime " + std::to_string(t) + " s");
  o.note = o.pass ? "derivations integral in " + std::to_string(t) + " s" : o.note;
  return o;
}

Outcome property_criterion(const std::vector<std::string>& names, int samples, std::uint64_t seed) {
  Outcome o;
  int checked = 0;
  for (long p : {2L, 3L}) {
    const auto rep = witt_property_suite(p, 2, samples, seed);
    for (const auto& t : rep.properties) {
      const std::string base = t.name.substr(0, t.name.find('/'));
      if (std::find(names.begin(), names.end(), base) == names.end()) continue;
      o.require(t.samples >= samples && t.failures == 0, "p=" + std::to_string(p) + " " + t.name);
      ++checked;
    }
  }
  o.require(checked > 0, "no properties checked");
  if (o.pass) o.note = std::to_string(checked) + " property tallies, " + std::to_string(samples) + " samples each";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (long p : {2L, 3L})
    for (int n = 0; n <= 3; ++n) {
      const long order = witt_unit_additive_order(p, n);
      o.require(order == ipow(p, static_cast<std::uint64_t>(n + 1)).get_si(),
                "p=" + std::to_string(p) + " n=" + std::to_string(n) + " order " + std::to_string(order));
    }
  if (o.pass) o.note = "order of 1 is p^(n+1) for p=2,3, n<=3";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::vector<TowerSpec> specs;
  for (long p : {2L, 3L}) {
    specs.push_back(tower(TowerKind::Unramified, p, 6));
    specs.push_back(tower(TowerKind::Ramified, p, 6, "t1^2"));
    specs.push_back(tower(TowerKind::Ramified, p, 6, "t1^2+t2^3"));
  }
  std::size_t roots = 0;
  for (const auto& s : specs)
    for (int n = 0; n <= 2; ++n) {
      const auto rep = frob_surjectivity_report(s, n, 6);
      const std::string where = std::string(to_string(s.kind)) + " p=" + std::to_string(s.p) + " " + s.G +
                                " n=" + std::to_string(n);
      o.require(rep.all_rooted(), "unrooted monomial, " + where);
      o.require(rep.nilpotency_certified, "nilpotency, " + where);
      o.require(rep.nilpotency_bound == static_cast<std::uint64_t>(ipow(s.p, static_cast<std::uint64_t>(n)).get_ui()),
                "bound, " + where);
      o.require(!rep.nilpotency_exact || *rep.nilpotency_exact <= rep.nilpotency_bound, "exponent, " + where);
      o.require(n == 0 || rep.witness_nonzero_mod_p, "witness zero mod p, " + where);
      roots += rep.roots.size();
    }
  if (o.pass) o.note = std::to_string(roots) + " certified roots over 18 tower levels";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto start = Clock::now();
  for (long p : {2L, 3L})
    for (const std::string G : {"t1^2", "t1^2+t2^3"}) {
      const auto spec = tower(TowerKind::Ramified, p, 12, G, 5);
      const std::string where = "p=" + std::to_string(p) + " G=" + G;
      const auto level = build_level(spec, 1);
      const auto u = ramified_uniformizer(level, default_decomposition(spec));
      o.require(u.verified, "uniformizer, " + where);
      o.require(u.pi.pow(static_cast<std::uint64_t>(p)) == u.u * Integer(p), "pi^p = p u, " + where);
      o.require((u.u * u.u_inverse).is_one(), "unit, " + where);
      const auto w = witt_perfect_criterion(spec, 1);
      o.require(w.congruence.is_member() && w.congruence.verify(), "r^p = -p mod p^2, " + where);
      o.require(w.s == w.s.algebra()->constant(p) && w.Nexp == 1, "s = p, N = 1, " + where);
      o.require(w.power.verify(), "s^N in (p), " + where);
    }
  const double t = seconds_since(start);
  o.require(t < 60, "runtime " + std::to_string(t) + " s");
  if (o.pass) o.note = "4 towers certified in " + std::to_string(t) + " s";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto w3 = witt_perfect_criterion(tower(TowerKind::Valuation, 3, 6), 1);
  const auto& A3 = w3.r.algebra();
  o.require(w3.r == -A3->var_power("pi", 1, 1), "r = -pi_1 (p=3)");
  o.require(w3.r.pow(3) == -A3->constant(3), "(-pi_1)^3 = -3");
  o.require(w3.verified(), "p=3 certificates");
  const auto w2 = witt_perfect_criterion(tower(TowerKind::Valuation, 2, 6), 1);
  const auto& A2 = w2.r.algebra();
  o.require(w2.r == A2->var_power("pi", 1, 1), "r = pi_1 (p=2)");
  o.require(w2.s == A2->constant(2) && w2.Nexp == 1, "s = 2, N = 1");
  o.require(w2.verified(), "p=2 certificates");
  return o;
}

Outcome criterion8() {
  Outcome o;
  // (x1, x2) instance: x2 u2 = x1 u1 with u1 = x2, u2 = x1 on M = T.
  const auto T = power_series(3, 1, 3, {"x1", "x2"});
  const auto M = module_from_algebra(T);
  const auto x1 = T->var("x1"), x2 = T->var("x2");
  const ParameterRelation rel{1, {x1, x2}, {to_vector(x2), to_vector(x1)}};
  const auto mod = build_modification(M, rel, 2);
  const auto cert = check_trivialization(mod);
  o.require(cert.holds && cert.verify(mod), "trivialization certificate");

  auto replay = [&](const Modification& m, const BoundedMap& alpha, const std::string& where) {
    const auto r = lemma51_beta(m, alpha);
    o.require(r.square_commutes && r.kills_denominator, "square paths, " + where);
    o.require(r.alpha_linear && r.beta_linear, "linearity, " + where);
    o.require(r.beta.denom_exp <= r.bound, "denominator bound, " + where);
  };
  replay(mod, inclusion_map(M, T->unit(), 1), "(x1,x2) c=1");
  int bad = 0;
  for (long p : {2L, 3L}) {
    auto spec = tower(TowerKind::Unramified, p, 2, "", 2);
    const auto B = build_level(spec, 1);
    const auto BM = module_from_algebra(B.A);
    const auto pc = B.A->constant(p), y = B.A->var("x2");
    const ParameterRelation trel{1, {pc, y}, {to_vector(y), to_vector(pc)}};
    replay(build_modification(BM, trel, 2), inclusion_map(BM, B.A->var_power("pi", 1, 1), 1),
           "tower p=" + std::to_string(p));
    const auto sop = canonical_sop(B);
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
      bad += random_admissible_sequence(B.A, sop, 1 + static_cast<int>(seed % 3), 1, seed).bad ? 1 : 0;
  }
  o.require(bad == 0, std::to_string(bad) + " bad sequences");
  if (o.pass) o.note = "certificates verified, 100 random sequences, 0 bad";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto R = power_series(3, 6, 6);
  const auto P = monogenic_extension(R, {parse_polynomial("-3*(1+x)", R), R->zero(), R->unit()});
  const std::vector<PolyElement> sop{R->constant(3), R->var("x")};
  const auto suite = split_suite(P, sop, 3, 5);
  o.require(suite.etale.verdict == EtaleVerdict::Etale && suite.etale.certificate && suite.etale.certificate->verify(),
            "etale");
  o.require(suite.split.per_k.size() == 3, "k = 1..3");
  for (const auto& [k, c] : suite.split.per_k) o.require(!c.member(), "member at k=" + std::to_string(k));
  o.require(suite.split.retraction && suite.split.retraction->verified, "retraction");
  if (suite.split.retraction) o.require(suite.split.retraction->apply(P, P.one()) == R->unit(), "phi(1) = 1");
  o.require(suite.consistent(), "joint condition");

  AlgebraSpec fs{3, 3, 0, 6, {{"x"}}};
  const auto F = TruncatedAlgebra::create(fs);
  const auto control = presentation_from_map(R, F, {F->var("x")});
  for (const auto& [k, c] : monomial_check(control, sop, 3))
    o.require(c.member() && c.certificate.verify(), "p=0 control not Member at k=" + std::to_string(k));
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidSpec("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10(Clock::time_point suite_start) {
  Outcome o;
  for (const std::string name : {"witt", "towers", "modules", "split"}) {
    const std::string base = std::string(WITTKIT_FIXTURES) + "/" + name;
    const auto plan = parse_ringspec(slurp(base + ".ws"));
    o.require(parse_ringspec(print_ringspec(plan)) == plan, "round trip " + name);
    RunOptions opts;
    opts.timing = false;
    opts.jobs = 2;
    const auto report = run_checks(plan, opts);
    o.require(report.pass(), "fixture verdicts " + name);
    o.require(report.to_json(false).dump(2) + "\n" == slurp(base + ".golden.json"), "golden " + name);
  }
  const double t = seconds_since(suite_start);
  o.require(t < 300, "suite took " + std::to_string(t) + " s");
  if (o.pass) o.note = "4 fixtures stable, whole run " + std::to_string(t) + " s";
  return o;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Witt polynomial integrality", criterion1},
      {"ring axioms via ghost",
       [] { return property_criterion({"ghost_hom", "add_assoc", "mul_assoc", "distrib"}, 200, 20240601); }},
      {"structural identities",
       [] { return property_criterion({"FV=p", "V(x)y=V(xF(y))", "F_add", "F_mul", "F_char_p"}, 100, 77); }},
      {"additive order of the unit", criterion4},
      {"tower Frobenius surjectivity", criterion5},
      {"ramified uniformizer", criterion6},
      {"Witt-perfect witnesses", criterion7},
      {"modification engine", criterion8},
      {"splitting suite", criterion9},
      {"CLI round trip and golden reports", [start] { return criterion10(start); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("threw ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first;
    if (!o.note.empty()) std::cout << " (" << o.note << ")";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
