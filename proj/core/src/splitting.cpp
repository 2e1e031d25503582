#include "wittkit/splitting.hpp"

#include <algorithm>

#include "wittkit/errors.hpp"

namespace wittkit {

using linalg::Vec;

namespace {

constexpr std::size_t kMaxRetractionUnknowns = 20000;
constexpr std::size_t kMaxDeterminant = 9;

PolyElement model_basis(const AlgebraPtr& A, std::size_t j) { return PolyElement(A, Terms{{A->linear_model().basis.at(j), 1}}); }

PolyElement smallest_var(const AlgebraPtr& A, int i) { return PolyElement(A, Terms{{A->var_monomial(i, 1), 1}}); }

PolyElement det_rec(const std::vector<std::vector<PolyElement>>& m, std::size_t row, std::vector<bool>& used) {
  const std::size_t n = m.size();
  const auto& A = m[0][0].algebra();
  if (row == n) return A->unit();
  PolyElement sum = A->zero();
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    if (used[c]) continue;
    if (!m[row][c].is_zero()) {
      used[c] = true;
      const PolyElement minor = det_rec(m, row + 1, used);
      used[c] = false;
      const PolyElement t = m[row][c] * minor;
      sum = sign > 0 ? sum + t : sum - t;
    }
    sign = -sign;
  }
  return sum;
}

}  // namespace

FiniteAlgebraPresentation monogenic_extension(const AlgebraPtr& R, const std::vector<PolyElement>& h, const std::string& z) {
  if (R->carry()) throw PreconditionViolation("monogenic extensions of p-carry algebras are not supported");
  if (h.size() < 2) throw PreconditionViolation("h must have positive degree");
  for (const auto& c : h)
    if (c.algebra() != R) throw PreconditionViolation("coefficients of h must lie in the base");
  if (!h.back().is_one()) throw NotMonic("leading coefficient of h is not 1");
  if (R->var_index(z)) throw InvalidSpec("generator name clashes with a base variable: " + z);

  AlgebraSpec spec = R->spec();
  if (static_cast<int>(spec.vars.size()) >= kMaxVars) throw CapExceeded("too many variables");
  spec.vars.push_back({z, 1, false});
  const auto free = TruncatedAlgebra::create(spec);
  std::vector<std::pair<PolyElement, PolyElement>> rules;
  for (const auto& rw : R->rewrites()) rules.emplace_back(PolyElement(free, Terms{{rw.lead, 1}}), PolyElement(free, rw.tail));
  const std::size_t m = h.size() - 1;
  PolyElement tail = free->zero();
  const PolyElement zv = free->var(z);
  for (std::size_t i = 0; i < m; ++i) tail = tail - h[i].convert(free) * zv.pow(i);
  rules.emplace_back(zv.pow(m), tail);
  const auto S = free->with_rewrites(rules);

  std::vector<PolyElement> images;
  for (const auto& v : R->vars()) images.push_back(S->var(v.name));
  FiniteAlgebraPresentation P{R, S, RingMap(R, S, images), h, z};
  return P;
}

FiniteAlgebraPresentation presentation_from_map(const AlgebraPtr& R, const AlgebraPtr& S,
                                                const std::vector<PolyElement>& images) {
  return FiniteAlgebraPresentation{R, S, RingMap(R, S, images), std::nullopt, ""};
}

Module module_over_base(const FiniteAlgebraPresentation& P) {
  const auto& model = P.S->linear_model();
  Module M;
  M.ring = P.base;
  M.zmod = model_ring(P.S);
  M.dim = model.basis.size();
  M.relations = model.extra_relations;
  for (int i = 0; i < P.base->nvars(); ++i) {
    const PolyElement x = P.image(smallest_var(P.base, i));
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < M.dim; ++j) cols.push_back(to_vector(x * model_basis(P.S, j)));
    M.action.push_back(std::move(cols));
  }
  M.iota = to_vector(P.S->unit());
  return M;
}

bool check_multiplication_table(const FiniteAlgebraPresentation& P, std::size_t max_basis) {
  const std::size_t n = std::min(max_basis, P.S->linear_model().basis.size());
  std::vector<PolyElement> b;
  for (std::size_t j = 0; j < n; ++j) b.push_back(model_basis(P.S, j));
  for (std::size_t i = 0; i < n; ++i) {
    if (P.one() * b[i] != b[i]) return false;
    for (std::size_t j = 0; j < n; ++j) {
      const PolyElement bij = b[i] * b[j];
      if (bij != b[j] * b[i]) return false;
      for (std::size_t k = 0; k < n; ++k)
        if (bij * b[k] != b[i] * (b[j] * b[k])) return false;
    }
  }
  return true;
}

bool is_regular_model(const AlgebraPtr& R) {
  if (R->has_relations() || R->level() != 0 || !R->cap() || R->modulus() == 0) return false;
  for (const auto& v : R->vars())
    if (!v.graded) return false;
  return true;
}

std::map<int, MonomialCheck> monomial_check(const FiniteAlgebraPresentation& P, const std::vector<PolyElement>& sop,
                                            int k_max) {
  if (!is_regular_model(P.base)) throw PreconditionViolation("monomial criterion needs a regular base");
  if (sop.empty()) throw PreconditionViolation("empty system of parameters");
  std::vector<PolyElement> xs;
  for (const auto& x : sop) xs.push_back(P.image(x));
  std::map<int, MonomialCheck> out;
  for (int k = 1; k <= k_max; ++k) {
    PolyElement prod = P.S->unit();
    std::vector<PolyElement> gens;
    for (const auto& x : xs) {
      prod = prod * x;
      gens.push_back(x.pow(static_cast<std::uint64_t>(k) + 1));
    }
    out.emplace(k, MonomialCheck{k, solve_linear_membership(prod.pow(static_cast<std::uint64_t>(k)), gens)});
  }
  return out;
}

PolyElement RetractionMap::apply(const FiniteAlgebraPresentation& P, const PolyElement& s) const {
  const Vec v = to_vector(s);
  PolyElement sum = P.base->zero();
  for (std::size_t l = 0; l < v.size(); ++l)
    if (v[l] != 0) sum = sum + values[l] * Integer(static_cast<unsigned long>(v[l]));
  return sum;
}

std::optional<RetractionMap> retraction_solver(const FiniteAlgebraPresentation& P) {
  const auto& R = P.base;
  const auto& Rm = R->linear_model();
  const auto& Sm = P.S->linear_model();
  const std::size_t nR = Rm.basis.size(), nS = Sm.basis.size();
  if (nR * nS > kMaxRetractionUnknowns) throw CapExceeded("retraction system too large");
  const linalg::Zmod zR = model_ring(R);
  const std::uint64_t mR = zR.modulus();

  // Equation blocks: sum_l c_l phi(b_l) - x phi(b_j) = rhs, n_R rows each.
  struct Block {
    Vec c;
    int var = -1;
    std::size_t j = 0;
    Vec rhs;
    std::uint64_t scale = 1;
  };
  std::vector<Block> blocks;
  std::vector<PolyElement> xs;
  for (int i = 0; i < R->nvars(); ++i) xs.push_back(smallest_var(R, i));
  for (int i = 0; i < R->nvars(); ++i)
    for (std::size_t j = 0; j < nS; ++j)
      blocks.push_back({to_vector(P.image(xs[static_cast<std::size_t>(i)]) * model_basis(P.S, j)), i, j, Vec(nR, 0)});
  for (const auto& rel : Sm.extra_relations) blocks.push_back({rel, -1, 0, Vec(nR, 0)});
  if (Sm.modulus_exponent < Rm.modulus_exponent) {
    for (std::size_t j = 0; j < nS; ++j) {
      Vec c(nS, 0);
      c[j] = 1;
      blocks.push_back({c, -1, 0, Vec(nR, 0), zR.pow_p(Sm.modulus_exponent)});  // p^{e_S} phi(b_j) = 0
    }
  }
  blocks.push_back({to_vector(P.one()), -1, 0, to_vector(R->unit())});

  // x acting on R's model, column r = x * b_r.
  std::vector<std::vector<Vec>> act(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t r = 0; r < nR; ++r) act[i].push_back(to_vector(xs[i] * model_basis(R, r)));

  const std::size_t rows = blocks.size() * nR;
  std::vector<Vec> cols;
  for (std::size_t l = 0; l < nS; ++l)
    for (std::size_t r = 0; r < nR; ++r) {
      Vec col(rows, 0);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Block& B = blocks[b];
        const std::uint64_t c = zR.mul(B.c[l] % mR, B.scale);
        if (c != 0) col[b * nR + r] = zR.add(col[b * nR + r], c);
        if (B.var >= 0 && B.j == l) {
          const Vec& xr = act[static_cast<std::size_t>(B.var)][r];
          for (std::size_t q = 0; q < nR; ++q) col[b * nR + q] = zR.sub(col[b * nR + q], xr[q]);
        }
      }
      cols.push_back(std::move(col));
    }
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (const auto& sigma : Rm.extra_relations) {
      Vec col(rows, 0);
      std::copy(sigma.begin(), sigma.end(), col.begin() + static_cast<std::ptrdiff_t>(b * nR));
      cols.push_back(std::move(col));
    }
  Vec rhs(rows, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    std::copy(blocks[b].rhs.begin(), blocks[b].rhs.end(), rhs.begin() + static_cast<std::ptrdiff_t>(b * nR));

  auto sol = linalg::SmithSolver(zR, rows, cols).solve(rhs);
  if (!sol) return std::nullopt;
  RetractionMap phi;
  for (std::size_t l = 0; l < nS; ++l) {
    Vec part(sol->begin() + static_cast<std::ptrdiff_t>(l * nR), sol->begin() + static_cast<std::ptrdiff_t>((l + 1) * nR));
    phi.values.push_back(from_vector(R, part));
  }

  // Independent re-verification on the basis.
  bool ok = phi.apply(P, P.one()) == R->unit();
  for (std::size_t i = 0; i < xs.size() && ok; ++i)
    for (std::size_t j = 0; j < nS && ok; ++j)
      ok = phi.apply(P, P.image(xs[i]) * model_basis(P.S, j)) == xs[i] * phi.values[j];
  const Integer torsion = P.S->linear_modulus();
  for (std::size_t j = 0; j < nS && ok; ++j) ok = (phi.values[j] * torsion).is_zero();
  for (const auto& rel : Sm.extra_relations) {
    PolyElement s = R->zero();
    for (std::size_t l = 0; l < nS; ++l)
      if (rel[l] != 0) s = s + phi.values[l] * Integer(static_cast<unsigned long>(rel[l]));
    ok = ok && s.is_zero();
  }
  phi.verified = ok;
  return phi;
}

// ---------------------------------------------------------------------------

PolyElement determinant(const std::vector<std::vector<PolyElement>>& m) {
  if (m.empty()) throw PreconditionViolation("empty matrix");
  if (m.size() > kMaxDeterminant) throw CapExceeded("determinant larger than 9x9");
  for (const auto& row : m)
    if (row.size() != m.size()) throw PreconditionViolation("matrix is not square");
  std::vector<bool> used(m.size(), false);
  return det_rec(m, 0, used);
}

PolyElement sylvester_resultant(const std::vector<PolyElement>& f, const std::vector<PolyElement>& g) {
  if (f.size() < 2 || g.empty()) throw PreconditionViolation("resultant needs deg f >= 1");
  const auto& A = f[0].algebra();
  const std::size_t m = f.size() - 1, n = g.size() - 1;
  if (n == 0) return g[0].pow(m);
  const std::size_t size = m + n;
  std::vector<std::vector<PolyElement>> S(size, std::vector<PolyElement>(size, A->zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= m; ++k) S[i][i + k] = f[m - k];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= n; ++k) S[n + i][i + k] = g[n - k];
  return determinant(S);
}

PolyElement discriminant(const std::vector<PolyElement>& h) {
  if (h.size() < 2) throw PreconditionViolation("h must have positive degree");
  if (!h.back().is_one()) throw NotMonic("leading coefficient of h is not 1");
  std::vector<PolyElement> dh;
  for (std::size_t i = 1; i < h.size(); ++i) dh.push_back(h[i] * Integer(static_cast<unsigned long>(i)));
  const std::size_t m = h.size() - 1;
  const PolyElement res = sylvester_resultant(h, dh);
  return (m * (m - 1) / 2) % 2 == 0 ? res : -res;
}

std::string to_string(EtaleVerdict v) { return v == EtaleVerdict::Etale ? "Etale" : "NotEtaleAwayFromP"; }

EtaleReport etale_away_from_p(const FiniteAlgebraPresentation& P, int a_max) {
  if (!P.monic) throw PreconditionViolation("etale check needs S = R[z]/(h)");
  const auto& R = P.base;
  EtaleReport rep;
  rep.disc = discriminant(*P.monic);
  int limit = a_max;
  const int prec = R->effective_precision();
  if (prec > 0) limit = std::min(limit, prec - 1);  // p^prec = 0 is in every ideal
  for (int a = 0; a <= limit; ++a) {
    rep.searched_up_to = a;
    auto cert = solve_linear_membership(R->constant(ipow(R->p(), static_cast<std::uint64_t>(a))), {rep.disc});
    if (cert.is_member() && cert.verify()) {
      rep.verdict = EtaleVerdict::Etale;
      rep.a = a;
      rep.certificate = std::move(cert);
      return rep;
    }
  }
  return rep;
}

bool SplitSuite::consistent() const {
  if (etale.verdict != EtaleVerdict::Etale) return true;
  for (const auto& [k, c] : split.per_k)
    if (c.member()) return false;
  return split.retraction && split.retraction->verified;
}

SplitSuite split_suite(const FiniteAlgebraPresentation& P, const std::vector<PolyElement>& sop, int k_max, int a_max) {
  SplitSuite out;
  out.etale = etale_away_from_p(P, a_max);
  out.split.per_k = monomial_check(P, sop, k_max);
  out.split.retraction = retraction_solver(P);
  out.split.degree_window = P.S->scaled_cap().value_or(0);
  out.split.precision = P.S->effective_precision();
  return out;
}

}  // namespace wittkit
