#include "wittkit/module.hpp"

#include "wittkit/errors.hpp"

namespace wittkit {

using linalg::Span;
using linalg::Vec;

Vec Module::basis_vector(std::size_t j) const {
  Vec v(dim, 0);
  v.at(j) = 1;
  return v;
}

Vec Module::add(const Vec& a, const Vec& b) const {
  Vec out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = zmod.add(a[i], b[i]);
  return out;
}

Vec Module::sub(const Vec& a, const Vec& b) const {
  Vec out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = zmod.sub(a[i], b[i]);
  return out;
}

Vec Module::scale(const Vec& a, std::uint64_t c) const {
  Vec out = a;
  zmod.scale(out, c);
  return out;
}

Vec Module::act(const PolyElement& r, const Vec& v) const {
  if (!ring->same_shape(*r.algebra()) || r.algebra()->level() != ring->level())
    throw PreconditionViolation("ring element from a different algebra");
  auto apply = [&](int var, const Vec& x) {
    Vec out(dim, 0);
    for (std::size_t j = 0; j < dim; ++j)
      if (x[j] != 0) zmod.axpy(out, x[j], action[static_cast<std::size_t>(var)][j]);
    return out;
  };
  Vec total(dim, 0);
  const Integer m = zmod.modulus();
  for (const auto& [mono, c] : r.terms()) {
    Vec cur = v;
    for (int i = 0; i < ring->nvars(); ++i)
      for (std::int32_t e = 0; e < mono.exps[i]; ++e) cur = apply(i, cur);
    Integer cr;
    mpz_fdiv_r(cr.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    zmod.axpy(total, cr.get_ui(), cur);
  }
  return total;
}

Span Module::relation_span() const {
  Span s(zmod, dim);
  for (const auto& r : relations) s.insert(r);
  return s;
}

Vec element_vector(const Module& M, const PolyElement& t) {
  if (t.algebra()->linear_model().basis.size() != M.dim) throw PreconditionViolation("module is not the algebra");
  return to_vector(t);
}

PolyElement vector_element(const AlgebraPtr& T, const Vec& v) { return from_vector(T, v); }

Module module_from_algebra(const AlgebraPtr& T) { return free_module(T, 1); }

Module free_module(const AlgebraPtr& T, std::size_t r) {
  const auto& model = T->linear_model();
  const std::size_t n = model.basis.size();
  Module M;
  M.ring = T;
  M.zmod = model_ring(T);
  M.dim = n * r;
  for (std::size_t b = 0; b < r; ++b)
    for (const auto& rel : model.extra_relations) {
      Vec v(M.dim, 0);
      std::copy(rel.begin(), rel.end(), v.begin() + static_cast<std::ptrdiff_t>(b * n));
      M.relations.push_back(std::move(v));
    }
  for (int i = 0; i < T->nvars(); ++i) {
    const PolyElement x(T, Terms{{T->var_monomial(i, 1), 1}});
    std::vector<Vec> cols;
    for (std::size_t b = 0; b < r; ++b) {
      for (std::size_t j = 0; j < n; ++j) {
        const Vec img = to_vector(PolyElement(T, Terms{{model.basis[j], 1}}) * x);
        Vec v(M.dim, 0);
        std::copy(img.begin(), img.end(), v.begin() + static_cast<std::ptrdiff_t>(b * n));
        cols.push_back(std::move(v));
      }
    }
    M.action.push_back(std::move(cols));
  }
  M.iota = M.zero();
  const Vec one = to_vector(T->unit());
  std::copy(one.begin(), one.end(), M.iota.begin());
  return M;
}

std::size_t minimal_generator_count(const Module& M, const std::vector<PolyElement>& maximal_ideal) {
  Span s = M.relation_span();
  for (std::size_t j = 0; j < M.dim; ++j) {
    const Vec e = M.basis_vector(j);
    s.insert(M.scale(e, static_cast<std::uint64_t>(M.zmod.p()) % M.zmod.modulus()));
    for (const auto& g : maximal_ideal) s.insert(M.act(g, e));
  }
  // M / mM is an F_p-space since p M lies in the span.
  return M.dim - s.unit_pivot_count();
}

std::vector<Vec> module_colon(const Module& M, const std::vector<PolyElement>& xs, const PolyElement& divisor,
                              const std::vector<Vec>& window) {
  // Submodule Q = relations + xs M (+ window). Solve divisor * y - q = 0.
  std::vector<Vec> q = M.relations;
  for (const auto& x : xs)
    for (std::size_t j = 0; j < M.dim; ++j) q.push_back(M.act(x, M.basis_vector(j)));
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < M.dim; ++j) cols.push_back(M.act(divisor, M.basis_vector(j)));
  for (const auto& v : q) {
    Vec neg = v;
    for (auto& x : neg) x = M.zmod.neg(x);
    cols.push_back(std::move(neg));
  }
  linalg::SmithSolver solver(M.zmod, M.dim, cols);
  Span seen(M.zmod, M.dim);
  for (const auto& v : q) seen.insert(v);
  for (const auto& v : window) seen.insert(v);
  std::vector<Vec> out;
  for (const auto& kv : solver.kernel()) {
    Vec y(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(M.dim));
    y = seen.reduce(std::move(y));
    bool zero = true;
    for (auto v : y) zero = zero && v == 0;
    if (zero) continue;
    seen.insert(y);
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace wittkit
