#include "wittkit/membership.hpp"

#include "wittkit/errors.hpp"

namespace wittkit {

using linalg::Span;
using linalg::Vec;

bool MembershipCertificate::verify() const {
  if (!coefficients) return false;
  if (coefficients->size() != generators.size()) return false;
  PolyElement sum = target.algebra()->zero();
  for (std::size_t i = 0; i < generators.size(); ++i) sum = sum + (*coefficients)[i] * generators[i];
  return sum == target;
}

linalg::Zmod model_ring(const AlgebraPtr& alg) {
  const auto& m = alg->linear_model();
  return linalg::Zmod(alg->p(), m.modulus_exponent);
}

Vec to_vector(const PolyElement& x) {
  const auto& model = x.algebra()->linear_model();
  Vec v(model.basis.size(), 0);
  for (const auto& [m, c] : x.terms()) {
    auto it = model.index.find(m);
    if (it == model.index.end()) throw PreconditionViolation("normal form outside the monomial basis");
    Integer r = c;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), model.modulus.get_mpz_t());
    v[it->second] = r.get_ui();
  }
  return v;
}

PolyElement from_vector(const AlgebraPtr& alg, const Vec& v) {
  const auto& model = alg->linear_model();
  Terms t;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) t.emplace(model.basis[i], Integer(static_cast<unsigned long>(v[i])));
  return PolyElement(alg, std::move(t));
}

static PolyElement basis_element(const AlgebraPtr& alg, const Monomial& m) {
  return PolyElement(alg, Terms{{m, 1}});
}

std::vector<Vec> ideal_columns(const AlgebraPtr& alg, const std::vector<PolyElement>& gens) {
  const auto& model = alg->linear_model();
  std::vector<Vec> cols;
  for (const auto& g : gens) {
    if (g.algebra() != alg) throw PreconditionViolation("generator outside the ambient algebra");
    for (const auto& b : model.basis) cols.push_back(to_vector(basis_element(alg, b) * g));
  }
  for (const auto& r : model.extra_relations) cols.push_back(r);
  return cols;
}

Span ideal_span(const AlgebraPtr& alg, const std::vector<PolyElement>& gens) {
  Span s(model_ring(alg), alg->linear_model().basis.size());
  for (const auto& c : ideal_columns(alg, gens)) s.insert(c);
  return s;
}

bool in_ideal(const PolyElement& x, const std::vector<PolyElement>& gens) {
  return ideal_span(x.algebra(), gens).contains(to_vector(x));
}

MembershipCertificate make_certificate(PolyElement target, std::vector<PolyElement> gens,
                                       std::vector<PolyElement> coefficients) {
  MembershipCertificate c{std::move(target), std::move(gens), std::move(coefficients)};
  return c;
}

MembershipCertificate solve_linear_membership(const PolyElement& target, const std::vector<PolyElement>& gens) {
  const auto& alg = target.algebra();
  const auto& model = alg->linear_model();
  const std::size_t n = model.basis.size();
  MembershipCertificate cert{target, gens, std::nullopt};
  if (target.is_zero()) {
    cert.coefficients = std::vector<PolyElement>(gens.size(), alg->zero());
    return cert;
  }
  const auto cols = ideal_columns(alg, gens);
  linalg::SmithSolver solver(model_ring(alg), n, cols);
  auto x = solver.solve(to_vector(target));
  if (!x) return cert;
  std::vector<PolyElement> q;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Vec part(x->begin() + static_cast<std::ptrdiff_t>(i * n), x->begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    q.push_back(from_vector(alg, part));
  }
  cert.coefficients = std::move(q);
  return cert;
}

std::vector<Vec> window_columns(const PolyElement& divisor, std::int64_t* degree_window, int* precision_window) {
  const auto& alg = divisor.algebra();
  const auto& model = alg->linear_model();
  const auto ring = model_ring(alg);
  std::vector<Vec> cols;
  const auto cap = alg->scaled_cap();
  std::int64_t dw = cap.value_or(0);
  int pw = model.modulus_exponent;
  if (!divisor.is_zero()) {
    if (cap) dw = *cap - *divisor.order();
    pw = model.modulus_exponent - std::min(divisor.min_valuation(), model.modulus_exponent);
  }
  for (std::size_t k = 0; k < model.basis.size(); ++k) {
    Vec v(model.basis.size(), 0);
    if (cap && model.basis[k].degree > dw) {
      v[k] = 1;
      cols.push_back(v);
    } else if (pw < model.modulus_exponent) {
      v[k] = ring.pow_p(pw);
      cols.push_back(v);
    }
  }
  if (degree_window) *degree_window = dw;
  if (precision_window) *precision_window = pw;
  return cols;
}

ColonModule colon_submodule(const std::vector<PolyElement>& gens, const PolyElement& divisor) {
  const auto& alg = divisor.algebra();
  const auto& model = alg->linear_model();
  const std::size_t n = model.basis.size();
  const auto ring = model_ring(alg);

  ColonModule out;
  const auto window = window_columns(divisor, &out.degree_window, &out.precision_window);
  const auto ideal = ideal_columns(alg, gens);

  // Solve v*y - k = 0 with y over the basis and k in the ideal.
  std::vector<Vec> cols;
  for (const auto& b : model.basis) cols.push_back(to_vector(basis_element(alg, b) * divisor));
  for (const auto& k : ideal) {
    Vec neg = k;
    for (auto& x : neg) x = ring.neg(x);
    cols.push_back(std::move(neg));
  }
  linalg::SmithSolver solver(ring, n, cols);

  Span seen(ring, n);
  for (const auto& c : ideal) seen.insert(c);
  for (const auto& c : window) seen.insert(c);
  for (const auto& kv : solver.kernel()) {
    Vec y(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(n));
    y = seen.reduce(std::move(y));
    bool zero = true;
    for (auto v : y) zero = zero && v == 0;
    if (zero) continue;
    seen.insert(y);
    out.basis.push_back(from_vector(alg, y));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<PolyElement> is_unit(const PolyElement& e) {
  const auto& alg = e.algebra();
  if (e.is_zero()) return alg->is_finite() && alg->linear_model().modulus == 1 ? std::optional(e) : std::nullopt;
  if (alg->is_local()) {
    const Integer c = e.constant_term();
    const long p = alg->p();
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)) != 0) return std::nullopt;
    // Newton iteration y <- y (2 - e y); the defect squares each step and the
    // maximal ideal is nilpotent.
    Integer modulus = alg->carry() ? Integer(p) : alg->modulus();
    Integer inv;
    mpz_invert(inv.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
    PolyElement y = alg->constant(inv);
    const PolyElement two = alg->constant(2);
    for (int iter = 0; iter < 64; ++iter) {
      const PolyElement ey = e * y;
      if (ey.is_one()) return y;
      y = y * (two - ey);
    }
    throw UnitCheckFailed("Newton inversion did not converge");
  }
  if (alg->is_finite()) {
    const auto& model = alg->linear_model();
    auto cols = ideal_columns(alg, {e});
    linalg::SmithSolver solver(model_ring(alg), model.basis.size(), cols);
    auto x = solver.solve(to_vector(alg->unit()));
    if (!x) return std::nullopt;
    Vec part(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(model.basis.size()));
    PolyElement inv = from_vector(alg, part);
    if (!(inv * e).is_one()) throw UnitCheckFailed("linear inverse failed to verify");
    return inv;
  }
  // Infinite algebras: only the constants +-1 (or units mod m) are decided.
  if (e.size() == 1 && e.terms().begin()->first.is_one()) {
    Coefficient c(e.constant_term(), alg->modulus());
    if (auto inv = c.inverse()) return alg->constant(inv->value());
    return std::nullopt;
  }
  throw NotFiniteDimensional("unit test needs a finite or local algebra");
}

}  // namespace wittkit
