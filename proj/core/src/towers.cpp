#include "wittkit/towers.hpp"

#include <algorithm>

#include "wittkit/errors.hpp"
#include "wittkit/polyparse.hpp"

namespace wittkit {

namespace {

bool all_divisible(const PolyElement& e, long p) {
  for (const auto& [m, c] : e.terms())
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)) == 0) return false;
  return true;
}

Integer digit(const Integer& c, long p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(p));
  return r;
}

std::vector<Variable> tower_vars(const TowerSpec& spec) {
  std::vector<Variable> vars;
  if (spec.kind == TowerKind::Ramified) {
    for (int i = 1; i <= spec.d; ++i) vars.push_back({"t" + std::to_string(i), 1, true});
  } else {
    vars.push_back({"pi", 1, false});
    if (spec.kind == TowerKind::Unramified)
      for (int i = 2; i <= spec.d; ++i) vars.push_back({"x" + std::to_string(i), 1, true});
  }
  return vars;
}

void validate(const TowerSpec& spec) {
  if (spec.p != 2 && spec.p != 3 && spec.p != 5) throw InvalidSpec("p must be 2, 3 or 5");
  if (spec.d < 1 || spec.d > 8) throw InvalidSpec("d must lie in [1, 8]");
  if (spec.N < 1) throw InvalidSpec("precision N must be positive");
  if (spec.D < 0) throw InvalidSpec("degree cap D must be non-negative");
  if (spec.kind == TowerKind::Ramified && spec.D < 2) throw InvalidSpec("ramified towers need D >= 2");
}

// Lowest degree of a term whose coefficient is a unit mod p.
std::optional<std::int64_t> order_mod_p(const PolyElement& e) {
  for (const auto& [m, c] : e.terms())
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(e.algebra()->p())) == 0) return m.degree;
  return std::nullopt;
}

// Monomials of the level-n algebra with degree <= bound (scaled), exponents of
// ungraded variables below their rewrite bound.
std::vector<Monomial> enumerate_monomials(const AlgebraPtr& alg, std::int64_t scaled_bound) {
  std::array<std::int32_t, kMaxVars> bound{};
  for (int i = 0; i < alg->nvars(); ++i) {
    const auto& v = alg->vars()[i];
    if (v.graded) {
      bound[i] = static_cast<std::int32_t>(scaled_bound / v.weight);
    } else {
      bound[i] = 0;
      for (const auto& rw : alg->rewrites())
        if (rw.lead.exps[i] > 0) bound[i] = rw.lead.exps[i] - 1;
    }
  }
  std::vector<Monomial> out;
  std::array<std::int32_t, kMaxVars> e{};
  auto rec = [&](auto&& self, int i, std::int64_t deg) -> void {
    if (i == alg->nvars()) {
      out.push_back(alg->monomial(e));
      return;
    }
    const auto& v = alg->vars()[i];
    for (std::int32_t x = 0; x <= bound[i]; ++x) {
      const std::int64_t dd = deg + (v.graded ? std::int64_t{v.weight} * x : 0);
      if (v.graded && dd > scaled_bound) break;
      e[i] = x;
      self(self, i + 1, dd);
    }
    e[i] = 0;
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const char* to_string(TowerKind k) {
  switch (k) {
    case TowerKind::Valuation: return "valuation";
    case TowerKind::Unramified: return "unramified";
    case TowerKind::Ramified: return "ramified";
  }
  return "?";
}

TowerKind tower_kind_from_string(const std::string& s) {
  if (s == "valuation") return TowerKind::Valuation;
  if (s == "unramified") return TowerKind::Unramified;
  if (s == "ramified") return TowerKind::Ramified;
  throw InvalidSpec("unknown tower kind '" + s + "'");
}

AlgebraPtr tower_base_free(const TowerSpec& spec) {
  validate(spec);
  AlgebraSpec s;
  s.p = spec.p;
  s.cap = spec.D;
  s.vars = tower_vars(spec);
  return TruncatedAlgebra::create(s);
}

PolyElement tower_G(const TowerSpec& spec) {
  if (spec.kind != TowerKind::Ramified) throw InvalidSpec("G is only defined for ramified towers");
  const auto base = tower_base_free(spec);
  PolyElement G = parse_polynomial(spec.G, base);
  if (G.is_zero()) throw InvalidSpec("G must be nonzero");
  for (const auto& [m, c] : G.terms())
    if (m.degree < 2) throw InvalidSpec("G must lie in the square of the maximal ideal: term of degree " +
                                        std::to_string(m.degree));
  if (all_divisible(G, spec.p)) throw InvalidSpec("G must not lie in pT");
  return G;
}

TowerLevel build_level(const TowerSpec& spec, int n) {
  validate(spec);
  if (n < 0) throw PreconditionViolation("negative tower level");
  if (n > 6) throw CapExceeded("tower level above 6");
  TowerLevel L;
  L.spec = spec;
  L.n = n;
  AlgebraSpec s;
  s.p = spec.p;
  s.level = n;
  s.cap = spec.D;
  s.vars = tower_vars(spec);
  auto free = TruncatedAlgebra::create(s);
  L.lift = free;
  if (spec.kind == TowerKind::Ramified) {
    const PolyElement G = tower_G(spec);
    L.A = free->with_p_carry(G);
  } else {
    auto mod = free->with_modulus(ipow(spec.p, static_cast<std::uint64_t>(spec.N)));
    L.A = mod->with_rewrites({{mod->var("pi"), mod->constant(spec.p)}});
  }
  return L;
}

PolyElement TowerLevel::include(const PolyElement& e, const TowerLevel& next) const {
  if (e.algebra() != A) throw PreconditionViolation("element does not belong to this level");
  if (next.n < n) throw PreconditionViolation("inclusion goes to a lower level");
  return e.convert(next.A);
}

PolyElement TowerLevel::from_lift(const PolyElement& e) const { return e.convert(A); }

PolyElement TowerLevel::nilpotent_witness() const {
  if (spec.kind != TowerKind::Ramified) return A->var_power("pi", 1, n);
  const PolyElement G = tower_G(spec);
  Terms t;
  for (const auto& [m, c] : G.terms()) t[A->monomial(m.exps)] += c;
  return PolyElement(A, std::move(t));
}

PolyElement frobenius_root(const PolyElement& e, const TowerLevel& level, const TowerLevel& next) {
  if (e.algebra() != level.A) throw PreconditionViolation("element does not belong to the given level");
  if (next.n != level.n + 1) throw PreconditionViolation("roots live exactly one level up");
  const auto cap = next.A->scaled_cap();
  Terms t;
  for (const auto& [m, c] : e.terms()) {
    const Monomial r = next.A->monomial(m.exps);
    if (cap && r.degree > *cap) throw NoRootAtTruncation("root of degree " + std::to_string(r.degree) +
                                                          " exceeds the cap at level " + std::to_string(next.n));
    Integer dg = digit(c, e.algebra()->p());
    if (dg != 0) t.emplace(r, dg);
  }
  return PolyElement(next.A, std::move(t));
}

PolyElement frobenius_root_within(const PolyElement& e) {
  const auto& alg = e.algebra();
  const long p = alg->p();
  Terms t;
  for (const auto& [m, c] : e.terms()) {
    std::array<std::int32_t, kMaxVars> x = m.exps;
    for (auto& v : x) {
      if (v % p != 0)
        throw NoRootAtTruncation("exponent not divisible by p at level " + std::to_string(alg->level()) +
                                 "; move one level up");
      v /= static_cast<std::int32_t>(p);
    }
    Integer dg = digit(c, p);
    if (dg != 0) t.emplace(alg->monomial(x), dg);
  }
  return PolyElement(alg, std::move(t));
}

bool verify_root(const PolyElement& e, const PolyElement& r, const TowerLevel& level, const TowerLevel& next) {
  const long p = level.spec.p;
  if (level.spec.kind == TowerKind::Ramified) {
    const auto rl = r.convert(next.lift);
    const auto el = e.convert(next.lift);
    return all_divisible(rl.pow(static_cast<std::uint64_t>(p)) - el, p);
  }
  return all_divisible(r.pow(static_cast<std::uint64_t>(p)) - level.include(e, next), p);
}

FrobeniusReport frob_surjectivity_report(const TowerSpec& spec, int n, std::int64_t up_to_degree) {
  const TowerLevel L = build_level(spec, n);
  const TowerLevel next = build_level(spec, n + 1);
  const long p = spec.p;
  FrobeniusReport rep;
  rep.n = n;
  rep.up_to_degree = std::min<std::int64_t>(up_to_degree, spec.D);
  for (const auto& m : enumerate_monomials(L.A, rep.up_to_degree * L.A->scale())) {
    PolyElement e(L.A, Terms{{m, 1}});
    RootRecord rec;
    rec.monomial = e.str();
    const PolyElement r = frobenius_root(e, L, next);
    rec.root = r.str();
    rec.verified = verify_root(e, r, L, next);
    rec.same_level_root = std::all_of(m.exps.begin(), m.exps.end(), [p](std::int32_t x) { return x % p == 0; });
    rep.rooted += rec.verified ? 1 : 0;
    rep.same_level_rooted += rec.same_level_root ? 1 : 0;
    rep.roots.push_back(std::move(rec));
  }

  const PolyElement x = L.nilpotent_witness();
  rep.nilpotent = x.str();
  rep.nilpotency_bound = ipow(p, static_cast<std::uint64_t>(n)).get_ui();
  if (spec.kind == TowerKind::Ramified) {
    // G_n^{p^n} = G + p q in the lift, hence = p (1 + q) in R_n.
    const PolyElement G = tower_G(spec);
    const PolyElement xl = x.convert(L.lift);
    const PolyElement q = exact_div_p(xl.pow(rep.nilpotency_bound) - G.convert(L.lift), 1);
    rep.nilpotency_certified =
        x.pow(rep.nilpotency_bound) == (L.A->unit() + q.convert(L.A)) * Integer(p);
    // Anything in pR_n = G R_n has order >= ord(G) mod p.
    const auto ox = order_mod_p(xl), og = order_mod_p(G.convert(L.lift));
    rep.witness_nonzero_mod_p = ox && og && *ox < *og;
  } else {
    PolyElement pw = L.A->unit();
    for (std::uint64_t k = 1; k <= rep.nilpotency_bound; ++k) {
      pw = pw * x;
      if (all_divisible(pw, p)) {
        rep.nilpotency_exact = k;
        break;
      }
    }
    rep.nilpotency_certified = rep.nilpotency_exact.has_value();
    rep.witness_nonzero_mod_p = !all_divisible(x, p);
  }
  return rep;
}

// ---------------------------------------------------------------------------

Decomposition default_decomposition(const TowerSpec& spec) {
  const PolyElement G = tower_G(spec);
  const auto& base = G.algebra();
  Decomposition dec;
  for (const auto& [m, c] : G.terms()) {
    int i = 0;
    while (m.exps[i] == 0) ++i;
    auto rest = m.exps;
    rest[i] -= 1;
    auto first = std::array<std::int32_t, kMaxVars>{};
    first[i] = 1;
    dec.b.push_back(PolyElement(base, Terms{{base->monomial(first), c}}));
    dec.b_prime.push_back(PolyElement(base, Terms{{base->monomial(rest), 1}}));
  }
  return dec;
}

Decomposition parse_decomposition(const TowerSpec& spec,
                                  const std::vector<std::pair<std::string, std::string>>& pairs) {
  const auto base = tower_base_free(spec);
  Decomposition dec;
  for (const auto& [a, b] : pairs) {
    dec.b.push_back(parse_polynomial(a, base));
    dec.b_prime.push_back(parse_polynomial(b, base));
  }
  return dec;
}

Uniformizer ramified_uniformizer(const TowerLevel& level, const Decomposition& dec) {
  if (level.spec.kind != TowerKind::Ramified) throw PreconditionViolation("uniformizer needs a ramified tower");
  if (level.n < 1) throw PreconditionViolation("uniformizer needs level n >= 1 for Frobenius roots");
  if (dec.b.empty() || dec.b.size() != dec.b_prime.size()) throw PreconditionViolation("malformed decomposition");
  const long p = level.spec.p;
  const auto up = static_cast<std::uint64_t>(p);
  const PolyElement G = tower_G(level.spec);
  const auto& base = G.algebra();

  PolyElement sum = base->zero();
  for (std::size_t i = 0; i < dec.b.size(); ++i) {
    for (const auto* b : {&dec.b[i], &dec.b_prime[i]}) {
      if (b->algebra()->vars().size() != base->vars().size() || !b->algebra()->same_shape(*base))
        throw PreconditionViolation("decomposition uses foreign variables");
      if (b->constant_term() != 0) throw PreconditionViolation("b_i = " + b->str() + " has a constant term");
    }
    sum = sum + dec.b[i].convert(base) * dec.b_prime[i].convert(base);
  }
  if (sum != G) throw PreconditionViolation("decomposition does not sum to G: " + sum.str());

  const auto& L = level.lift;
  std::vector<PolyElement> c, cp, d, dp;
  for (std::size_t i = 0; i < dec.b.size(); ++i) {
    const auto b = dec.b[i].convert(L), bp = dec.b_prime[i].convert(L);
    c.push_back(frobenius_root_within(b));
    cp.push_back(frobenius_root_within(bp));
    d.push_back(exact_div_p(b - c.back().pow(up), 1));
    dp.push_back(exact_div_p(bp - cp.back().pow(up), 1));
  }
  Uniformizer out;
  out.f = L->zero();
  out.h = L->zero();
  PolyElement sum_pp = L->zero();
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.f = out.f + c[i] * cp[i];
    sum_pp = sum_pp + c[i].pow(up) * cp[i].pow(up);
    out.h = out.h + c[i].pow(up) * dp[i] + d[i] * cp[i].pow(up) + d[i] * dp[i] * Integer(p);
  }
  out.g = exact_div_p(sum_pp - out.f.pow(up), 1);

  const auto& A = level.A;
  out.pi = out.f.convert(A);
  out.u = A->unit() - out.g.convert(A) - out.h.convert(A);
  if (out.pi.pow(up) != out.u * Integer(p))
    throw UnitCheckFailed("pi^p = p u fails at truncation D=" + std::to_string(level.spec.D));
  auto inv = is_unit(out.u);
  if (!inv) throw UnitCheckFailed("u = " + out.u.str() + " is not a unit");
  out.u_inverse = *inv;
  out.verified = true;
  return out;
}

// ---------------------------------------------------------------------------

PBigWitness p_big_sequence(const TowerSpec& spec, int m) {
  if (m < 0) throw PreconditionViolation("negative length");
  const TowerLevel Lm = build_level(spec, m);
  const auto& A = Lm.A;
  const long p = spec.p;
  const auto up = static_cast<std::uint64_t>(p);
  PBigWitness w;
  w.pis.push_back(A->constant(p));
  if (spec.kind != TowerKind::Ramified) {
    for (int i = 1; i <= m; ++i) {
      w.pis.push_back(A->var_power("pi", 1, i));
      w.units.push_back(A->unit());
    }
  } else if (m >= 1) {
    const TowerLevel L1 = build_level(spec, 1);
    const Uniformizer U = ramified_uniformizer(L1, default_decomposition(spec));
    w.pis.push_back(U.pi.convert(A));
    w.units.push_back(U.u.convert(A));
    for (int i = 1; i < m; ++i) {
      // pi_i = rho^p + p delta; p = pi_i^{p^i} U_i^{-1} with U_i = prod u_j^{p^j}.
      const PolyElement& pii = w.pis[static_cast<std::size_t>(i)];
      const PolyElement rho = frobenius_root_within(pii);
      const PolyElement delta =
          exact_div_p(pii.convert(Lm.lift) - rho.convert(Lm.lift).pow(up), 1).convert(A);
      PolyElement Ui = A->unit();
      for (int j = 0; j < i; ++j)
        Ui = Ui * w.units[static_cast<std::size_t>(j)].pow(ipow(p, static_cast<std::uint64_t>(j)).get_ui());
      const auto Uinv = is_unit(Ui);
      if (!Uinv) throw CannotExtend("accumulated unit is not invertible at truncation");
      const PolyElement ui =
          A->unit() - pii.pow(ipow(p, static_cast<std::uint64_t>(i)).get_ui() - 1) * *Uinv * delta;
      w.pis.push_back(rho);
      w.units.push_back(ui);
    }
  }
  bool ok = true;
  for (int i = 0; i < m; ++i) {
    const auto& u = w.units[static_cast<std::size_t>(i)];
    ok = ok && w.pis[static_cast<std::size_t>(i) + 1].pow(up) == w.pis[static_cast<std::size_t>(i)] * u;
    ok = ok && is_unit(u).has_value();
  }
  if (!ok) throw CannotExtend("p-big identities fail at truncation D=" + std::to_string(spec.D));
  w.verified = ok;
  return w;
}

// ---------------------------------------------------------------------------

WittPerfectWitness witt_perfect_criterion(const TowerSpec& spec, int n) {
  if (n < 1) throw PreconditionViolation("the criterion needs level n >= 1");
  const long p = spec.p;
  const auto up = static_cast<std::uint64_t>(p);
  WittPerfectWitness w;
  if (spec.kind != TowerKind::Ramified) {
    const TowerLevel L = build_level(spec, n);
    const auto& A = L.A;
    const PolyElement pi1 = A->var_power("pi", 1, 1);
    w.r = p == 2 ? pi1 : -pi1;
    w.s = A->constant(p);
    w.level = n;
    w.congruence = solve_linear_membership(w.r.pow(up) + A->constant(p), {w.s * Integer(p)});
    w.power = solve_linear_membership(w.s, {A->constant(p)});
  } else {
    const TowerLevel L = build_level(spec, n);
    const TowerLevel next = build_level(spec, n + 1);
    const Uniformizer U = ramified_uniformizer(L, default_decomposition(spec));
    // -u = v^p + p w with v a Frobenius root one level up.
    const PolyElement minus_u = -U.u;
    const PolyElement v = frobenius_root(minus_u, L, next);
    const PolyElement wl = exact_div_p(minus_u.convert(next.lift) - v.convert(next.lift).pow(up), 1);
    const auto vinv = is_unit(v);
    if (!vinv) throw NoWitness("v = " + v.str() + " is not a unit");
    const auto& A = next.A;
    w.r = U.pi.convert(A) * *vinv;
    w.s = A->constant(p);
    w.level = n + 1;
    // (pi/v)^p + p = p^2 (-w v^{-p}).
    const PolyElement q = -(wl.convert(A) * vinv->pow(up));
    w.congruence = make_certificate(w.r.pow(up) + A->constant(p), {A->constant(p * p)}, {q});
    w.power = make_certificate(w.s, {A->constant(p)}, {A->unit()});
  }
  w.Nexp = 1;
  if (!w.congruence.verify() || !w.power.verify())
    throw NoWitness("criterion certificates fail at truncation");
  return w;
}

}  // namespace wittkit
