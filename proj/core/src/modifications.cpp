#include "wittkit/modifications.hpp"

#include <algorithm>
#include <random>

#include "wittkit/errors.hpp"

namespace wittkit {

using linalg::Span;
using linalg::Vec;

namespace {

constexpr std::size_t kMaxModuleDim = 10000;

void enumerate_monomials(int k, int N, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  for (int deg = 0; deg <= N; ++deg) {
    // All exponent vectors of total degree `deg`, in lexicographic order.
    auto rec = [&](auto&& self, int i, int left) -> void {
      if (i == k - 1) {
        cur[static_cast<std::size_t>(i)] = left;
        out.push_back(cur);
        return;
      }
      for (int a = left; a >= 0; --a) {
        cur[static_cast<std::size_t>(i)] = a;
        self(self, i + 1, left - a);
      }
    };
    if (k == 0) {
      if (deg == 0) out.push_back({});
    } else {
      rec(rec, 0, deg);
    }
  }
}

int total_degree(const std::vector<int>& e) {
  int s = 0;
  for (int a : e) s += a;
  return s;
}

Integer residue(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

PolyElement basis_element(const AlgebraPtr& T, std::size_t j) {
  return PolyElement(T, Terms{{T->linear_model().basis.at(j), 1}});
}

}  // namespace

bool ParameterRelation::holds_in(const Module& M) const {
  if (xs.size() != static_cast<std::size_t>(k) + 1 || us.size() != xs.size()) return false;
  Vec lhs = M.act(xs.back(), us.back());
  for (int i = 0; i < k; ++i) lhs = M.sub(lhs, M.act(xs[static_cast<std::size_t>(i)], us[static_cast<std::size_t>(i)]));
  return M.is_zero(lhs);
}

std::size_t Modification::block_of(const std::vector<int>& exps) const {
  auto it = std::find(x_monomials.begin(), x_monomials.end(), exps);
  if (it == x_monomials.end()) throw PreconditionViolation("X-monomial outside the degree bound");
  return static_cast<std::size_t>(it - x_monomials.begin());
}

Vec Modification::in_block(const Vec& v, const std::vector<int>& exps) const {
  Vec out(target.dim, 0);
  const std::size_t b = block_of(exps);
  std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(b * source.dim));
  return out;
}

Vec Modification::track(const Vec& m) const { return in_block(m, std::vector<int>(static_cast<std::size_t>(rel.k), 0)); }

Modification build_modification(const Module& M, const ParameterRelation& rel, int N) {
  if (N < 0) throw PreconditionViolation("degree bound must be non-negative");
  if (rel.k < 0 || rel.xs.size() != static_cast<std::size_t>(rel.k) + 1 || rel.us.size() != rel.xs.size())
    throw PreconditionViolation("relation needs k+1 ring elements and k+1 module elements");
  if (rel.k > 0 && M.iota.size() != M.dim) throw PreconditionViolation("module has no distinguished element");
  if (!rel.holds_in(M)) throw RelationNotVerified("x_{k+1} u_{k+1} != sum x_i u_i in M");

  Modification mod;
  mod.source = M;
  mod.rel = rel;
  mod.N = N;
  enumerate_monomials(rel.k, N, mod.x_monomials);
  const std::size_t blocks = mod.x_monomials.size();
  if (M.dim * blocks > kMaxModuleDim) throw CapExceeded("modification exceeds 10^4 coordinates");

  Module& T = mod.target;
  T.ring = M.ring;
  T.zmod = M.zmod;
  T.dim = M.dim * blocks;
  for (std::size_t b = 0; b < blocks; ++b)
    for (const auto& r : M.relations) {
      Vec v(T.dim, 0);
      std::copy(r.begin(), r.end(), v.begin() + static_cast<std::ptrdiff_t>(b * M.dim));
      T.relations.push_back(std::move(v));
    }
  T.action.resize(M.action.size());
  for (std::size_t i = 0; i < M.action.size(); ++i)
    for (std::size_t b = 0; b < blocks; ++b)
      for (std::size_t j = 0; j < M.dim; ++j) {
        Vec v(T.dim, 0);
        const Vec& img = M.action[i][j];
        std::copy(img.begin(), img.end(), v.begin() + static_cast<std::ptrdiff_t>(b * M.dim));
        T.action[i].push_back(std::move(v));
      }
  T.iota = M.iota.size() == M.dim ? mod.track(M.iota) : Vec{};

  // F mu = u_{k+1} X^mu - sum_i x_i iota X^(mu + e_i), for deg mu <= N-1,
  // closed under R.
  std::vector<Vec> x_iota;
  for (int i = 0; i < rel.k; ++i) x_iota.push_back(M.act(rel.xs[static_cast<std::size_t>(i)], M.iota));
  std::vector<PolyElement> ring_basis;
  for (const auto& mono : M.ring->linear_model().basis) ring_basis.emplace_back(M.ring, Terms{{mono, 1}});
  for (const auto& mu : mod.x_monomials) {
    if (total_degree(mu) > N - 1) continue;
    ++mod.denominator_generators;
    Vec F = mod.in_block(rel.us.back(), mu);
    for (int i = 0; i < rel.k; ++i) {
      auto up = mu;
      ++up[static_cast<std::size_t>(i)];
      F = T.sub(F, mod.in_block(x_iota[static_cast<std::size_t>(i)], up));
    }
    for (const auto& a : ring_basis) T.relations.push_back(T.act(a, F));
  }
  return mod;
}

TrivializationCertificate check_trivialization(const Modification& mod) {
  const Module& T = mod.target;
  const int k = mod.rel.k;
  std::vector<Vec> cols;
  for (int i = 0; i < k; ++i)
    for (std::size_t j = 0; j < T.dim; ++j) cols.push_back(T.act(mod.rel.xs[static_cast<std::size_t>(i)], T.basis_vector(j)));
  for (const auto& r : T.relations) cols.push_back(r);
  TrivializationCertificate cert;
  const Vec rhs = mod.track(mod.rel.us.back());
  auto sol = cols.empty() ? std::optional<Vec>{} : linalg::SmithSolver(T.zmod, T.dim, cols).solve(rhs);
  if (cols.empty() && T.is_zero(rhs)) sol = Vec{};
  if (!sol) return cert;
  for (int i = 0; i < k; ++i) {
    const auto off = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * T.dim);
    cert.coefficients.emplace_back(sol->begin() + off, sol->begin() + off + static_cast<std::ptrdiff_t>(T.dim));
  }
  cert.holds = true;
  return cert;
}

bool TrivializationCertificate::verify(const Modification& mod) const {
  if (!holds || coefficients.size() != static_cast<std::size_t>(mod.rel.k)) return false;
  const Module& T = mod.target;
  Vec diff = mod.track(mod.rel.us.back());
  for (int i = 0; i < mod.rel.k; ++i)
    diff = T.sub(diff, T.act(mod.rel.xs[static_cast<std::size_t>(i)], coefficients[static_cast<std::size_t>(i)]));
  return T.is_zero(diff);
}

// ---------------------------------------------------------------------------

LocalizedElement BoundedMap::evaluate(const Module& M, const Vec& v) const {
  if (v.size() != values.size() || v.size() != M.dim) throw PreconditionViolation("vector does not match the map");
  const auto& T = c.algebra();
  PolyElement sum = T->zero();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] == 0 || values[j].numerator.is_zero()) continue;
    const int shift = denom_exp - values[j].exponent;
    if (shift < 0) throw PreconditionViolation("value exceeds the denominator bound");
    sum = sum + values[j].numerator * c.pow(static_cast<std::uint64_t>(shift)) * residue(v[j]);
  }
  return {sum, denom_exp};
}

bool localized_equal(const PolyElement& c, const LocalizedElement& a, const LocalizedElement& b) {
  const int m = std::max(a.exponent, b.exponent);
  return a.numerator * c.pow(static_cast<std::uint64_t>(m - a.exponent)) ==
         b.numerator * c.pow(static_cast<std::uint64_t>(m - b.exponent));
}

BoundedMap inclusion_map(const Module& M, const PolyElement& c, int n) {
  const auto& T = c.algebra();
  if (T->linear_model().basis.size() != M.dim) throw PreconditionViolation("module is not the algebra");
  BoundedMap alpha{c, n, {}};
  const PolyElement cn = c.pow(static_cast<std::uint64_t>(n));
  for (std::size_t j = 0; j < M.dim; ++j) alpha.values.push_back({cn * basis_element(T, j), n});
  return alpha;
}

Lemma51Result lemma51_beta(const Modification& mod, const BoundedMap& alpha) {
  const Module& M = mod.source;
  const Module& Mp = mod.target;
  const auto& T = alpha.c.algebra();
  const int N = alpha.denom_exp;
  const int D = mod.N;
  const int k = mod.rel.k;
  if (alpha.values.size() != M.dim) throw PreconditionViolation("alpha must have one value per generator");
  for (const auto& v : alpha.values)
    if (v.exponent > N || v.numerator.algebra() != T) throw PreconditionViolation("alpha value outside c^-N T");

  Lemma51Result res;
  res.bound = static_cast<std::int64_t>(N) * D + D + N;

  std::vector<PolyElement> xs_T;
  for (const auto& x : mod.rel.xs) xs_T.push_back(x.convert(T));
  std::vector<PolyElement> gens_M = maximal_ideal_generators(M.ring);

  // alpha is well defined and R-linear.
  res.alpha_linear = true;
  for (const auto& r : M.relations)
    res.alpha_linear = res.alpha_linear && alpha.evaluate(M, r).numerator.is_zero();
  for (const auto& x : gens_M) {
    const PolyElement xT = x.convert(T);
    for (std::size_t j = 0; j < M.dim && res.alpha_linear; ++j) {
      const Vec e = M.basis_vector(j);
      const auto lhs = alpha.evaluate(M, M.act(x, e));
      const auto ae = alpha.evaluate(M, e);
      res.alpha_linear = localized_equal(alpha.c, lhs, {xT * ae.numerator, ae.exponent});
    }
  }

  // Push the relation into T and solve c t_{k+1} = sum x_i t'_i.
  for (const auto& u : mod.rel.us) res.ts.push_back({alpha.evaluate(M, u).numerator, 0});
  const std::vector<PolyElement> xk(xs_T.begin(), xs_T.begin() + k);
  res.hypothesis = solve_linear_membership(alpha.c * res.ts.back().numerator, xk);
  if (!res.hypothesis.is_member() || !res.hypothesis.verify())
    throw AlmostCMViolation("c t_{k+1} is not in (x_1..x_k) T at truncation");
  const auto& tp = *res.hypothesis.coefficients;

  // beta(e_j X^mu) = alpha(e_j) prod (t'_i / c^{N+1})^{mu_i}.
  BoundedMap& beta = res.beta;
  beta.c = alpha.c;
  beta.denom_exp = 0;
  for (const auto& mu : mod.x_monomials) {
    PolyElement y = T->unit();
    for (int i = 0; i < k; ++i)
      y = y * tp[static_cast<std::size_t>(i)].pow(static_cast<std::uint64_t>(mu[static_cast<std::size_t>(i)]));
    const int e = N + total_degree(mu) * (N + 1);
    for (std::size_t j = 0; j < M.dim; ++j) {
      const auto& a = alpha.values[j];
      beta.values.push_back({a.numerator * y * alpha.c.pow(static_cast<std::uint64_t>(N - a.exponent)), e});
    }
    beta.denom_exp = std::max(beta.denom_exp, e);
  }

  res.square_commutes = true;
  for (std::size_t j = 0; j < M.dim && res.square_commutes; ++j) {
    const Vec e = M.basis_vector(j);
    res.square_commutes = localized_equal(alpha.c, beta.evaluate(Mp, mod.track(e)), alpha.evaluate(M, e));
  }
  res.kills_denominator = true;
  for (const auto& r : Mp.relations) {
    if (!beta.evaluate(Mp, r).numerator.is_zero()) {
      res.kills_denominator = false;
      break;
    }
  }
  res.beta_linear = true;
  for (const auto& x : gens_M) {
    const PolyElement xT = x.convert(T);
    for (std::size_t j = 0; j < Mp.dim && res.beta_linear; ++j) {
      const Vec e = Mp.basis_vector(j);
      const auto be = beta.evaluate(Mp, e);
      res.beta_linear = localized_equal(alpha.c, beta.evaluate(Mp, Mp.act(x, e)), {xT * be.numerator, be.exponent});
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

std::vector<PolyElement> maximal_ideal_generators(const AlgebraPtr& alg) {
  std::vector<PolyElement> out;
  for (int i = 0; i < alg->nvars(); ++i) out.emplace_back(alg, Terms{{alg->var_monomial(i, 1), 1}});
  return out;
}

bool detect_bad_sequence(const ModificationSequence& seq, const std::vector<PolyElement>& maximal_ideal) {
  return minimal_generator_count(seq.final_module(), maximal_ideal) == 0;
}

std::vector<std::vector<Vec>> parameter_relations(const Module& M, const std::vector<PolyElement>& sop, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= sop.size()) throw PreconditionViolation("k out of range");
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < M.dim; ++j) cols.push_back(M.act(sop[static_cast<std::size_t>(k)], M.basis_vector(j)));
  for (int i = 0; i < k; ++i)
    for (std::size_t j = 0; j < M.dim; ++j) {
      Vec v = M.act(sop[static_cast<std::size_t>(i)], M.basis_vector(j));
      for (auto& x : v) x = M.zmod.neg(x);
      cols.push_back(std::move(v));
    }
  for (const auto& r : M.relations) cols.push_back(r);
  std::vector<std::vector<Vec>> out;
  for (const auto& kv : linalg::SmithSolver(M.zmod, M.dim, cols).kernel()) {
    std::vector<Vec> us;
    for (int i = 1; i <= k; ++i) {
      const auto off = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * M.dim);
      us.emplace_back(kv.begin() + off, kv.begin() + off + static_cast<std::ptrdiff_t>(M.dim));
    }
    us.emplace_back(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(M.dim));
    bool trivial = true;
    for (const auto& u : us) trivial = trivial && M.is_zero(u);
    if (!trivial) out.push_back(std::move(us));
  }
  return out;
}

ParameterRelation koszul_relation(const Module& M, const std::vector<PolyElement>& sop, int k, std::mt19937_64& rng) {
  if (k < 0 || static_cast<std::size_t>(k) >= sop.size()) throw PreconditionViolation("k out of range");
  auto random_vec = [&] {
    Vec v(M.dim);
    for (auto& x : v) x = rng() % M.zmod.modulus();
    return v;
  };
  const auto K = static_cast<std::size_t>(k);
  std::vector<Vec> a(K);
  for (auto& v : a) v = random_vec();
  std::vector<std::vector<Vec>> s(K, std::vector<Vec>(K, M.zero()));
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) {
      s[i][j] = random_vec();
      s[j][i] = M.scale(s[i][j], M.zmod.neg(1));
    }
  ParameterRelation rel;
  rel.k = k;
  rel.xs.assign(sop.begin(), sop.begin() + k + 1);
  Vec last = M.zero();
  for (std::size_t i = 0; i < K; ++i) {
    last = M.add(last, M.act(sop[i], a[i]));
    Vec u = M.act(sop[K], a[i]);
    for (std::size_t j = 0; j < K; ++j)
      if (j != i) u = M.add(u, M.act(sop[j], s[i][j]));
    rel.us.push_back(std::move(u));
  }
  rel.us.push_back(std::move(last));
  return rel;
}

ModificationSequence random_admissible_sequence(const AlgebraPtr& T, const std::vector<PolyElement>& sop, int steps,
                                                int N, std::uint64_t seed) {
  if (sop.empty()) throw PreconditionViolation("empty system of parameters");
  std::mt19937_64 rng(seed);
  ModificationSequence seq;
  seq.start = module_from_algebra(T);
  for (int s = 0; s < steps; ++s) {
    const Module& M = seq.final_module();
    const int k = static_cast<int>(rng() % sop.size());
    seq.steps.push_back(build_modification(M, koszul_relation(M, sop, k, rng), N));
  }
  seq.bad = detect_bad_sequence(seq, maximal_ideal_generators(T));
  return seq;
}

}  // namespace wittkit
