#include "wittkit/almost.hpp"

#include <algorithm>

#include "wittkit/errors.hpp"

namespace wittkit {

namespace {

// All multisets of size m from {0..n-1}.
void multisets(int n, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m) {
    out.push_back(cur);
    return;
  }
  const int start = cur.empty() ? 0 : cur.back();
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    multisets(n, m, cur, out);
    cur.pop_back();
  }
}

}  // namespace

const char* to_string(DefectVerdict v) {
  switch (v) {
    case DefectVerdict::Zero: return "Zero";
    case DefectVerdict::AlmostZeroAtScale: return "AlmostZeroAtScale";
    case DefectVerdict::NotAlmostZero: return "NotAlmostZero";
  }
  return "?";
}

PIdealWitness is_p_ideal(const std::vector<PolyElement>& gens, int m_max) {
  PIdealWitness w;
  w.generators = gens;
  if (gens.empty()) {
    w.found = true;
    w.m = 1;
    return w;
  }
  const auto& alg = gens[0].algebra();
  const PolyElement p = alg->constant(alg->p());
  int limit = m_max;
  if (const auto cap = alg->scaled_cap()) {
    std::int64_t delta = 0;
    for (const auto& g : gens)
      if (!g.is_zero()) delta = std::max(delta, *g.order());
    // Products of degree past the cap vanish for truncation reasons only.
    if (delta > 0) limit = static_cast<int>(std::min<std::int64_t>(m_max, *cap / delta));
  }
  const linalg::Span span = ideal_span(alg, {p});
  for (int m = 1; m <= limit; ++m) {
    w.searched_up_to = m;
    std::vector<std::vector<int>> sets;
    std::vector<int> cur;
    multisets(static_cast<int>(gens.size()), m, cur, sets);
    bool all = true;
    std::vector<PolyElement> products;
    for (const auto& s : sets) {
      PolyElement prod = alg->unit();
      for (int i : s) prod = prod * gens[static_cast<std::size_t>(i)];
      if (!span.contains(to_vector(prod))) {
        all = false;
        break;
      }
      products.push_back(prod);
    }
    if (!all) continue;
    w.found = true;
    w.m = m;
    for (const auto& prod : products) w.certificates.push_back(solve_linear_membership(prod, {p}));
    return w;
  }
  return w;
}

bool DefectReport::monotone() const {
  // killers[e] true implies killers[e'] true for e' < e.
  bool seen_false = false;
  for (const auto& [e, ok] : killers) {
    if (!ok) seen_false = true;
    else if (seen_false) return false;
  }
  return true;
}

DefectReport almost_zero_defect(const SubquotientModule& M, const std::vector<Killer>& killers) {
  DefectReport rep;
  if (M.basis.empty()) {
    rep.verdict = DefectVerdict::Zero;
    return rep;
  }
  const auto& alg = M.basis[0].algebra();
  linalg::Span rel = ideal_span(alg, M.relations);
  for (const auto& w : M.window) rel.insert(w);
  for (const auto& b : M.basis)
    if (!rel.contains(to_vector(b))) rep.colon_basis.push_back(b);
  if (rep.colon_basis.empty()) {
    rep.verdict = DefectVerdict::Zero;
    return rep;
  }
  rep.verdict = DefectVerdict::AlmostZeroAtScale;
  for (const auto& k : killers) {
    if (k.level < 1) continue;
    bool kills = true;
    for (const auto& b : rep.colon_basis) {
      if (!rel.contains(to_vector(k.element * b))) {
        kills = false;
        if (rep.witness.empty()) rep.witness = "pi_" + std::to_string(k.level) + " = " + k.element.str() +
                                               " does not kill " + b.str();
        break;
      }
    }
    rep.killers[k.level] = kills;
    if (!kills) rep.verdict = DefectVerdict::NotAlmostZero;
  }
  if (rep.killers.empty()) {
    rep.verdict = DefectVerdict::NotAlmostZero;
    rep.witness = "no p-ideal generator available; surviving element " + rep.colon_basis[0].str();
  }
  return rep;
}

std::vector<Killer> tower_killers(const TowerLevel& B) {
  std::vector<Killer> out;
  if (B.n < 1) return out;
  if (B.spec.kind != TowerKind::Ramified) {
    for (int e = 1; e <= B.n; ++e) out.push_back({e, B.A->var_power("pi", 1, e)});
    return out;
  }
  const PBigWitness w = p_big_sequence(B.spec, B.n);
  for (int e = 1; e <= B.n; ++e) out.push_back({e, w.pis[static_cast<std::size_t>(e)].convert(B.A)});
  return out;
}

std::vector<PolyElement> canonical_sop(const TowerLevel& B) {
  std::vector<PolyElement> sop;
  if (B.spec.kind == TowerKind::Ramified) {
    for (int i = 1; i <= B.spec.d; ++i) sop.push_back(B.A->var("t" + std::to_string(i)));
  } else {
    sop.push_back(B.A->constant(B.spec.p));
    if (B.spec.kind == TowerKind::Unramified)
      for (int i = 2; i <= B.spec.d; ++i) sop.push_back(B.A->var("x" + std::to_string(i)));
  }
  return sop;
}

DefectReport colon_defect(const std::vector<PolyElement>& sop, int i, const std::vector<Killer>& killers,
                          const TransferData* transfer) {
  if (i < 0 || i >= static_cast<int>(sop.size())) throw PreconditionViolation("colon index out of range");
  const std::vector<PolyElement> xs(sop.begin(), sop.begin() + i);
  const PolyElement& divisor = sop[static_cast<std::size_t>(i)];
  const ColonModule colon = colon_submodule(xs, divisor);
  SubquotientModule M{colon.basis, xs, window_columns(divisor)};
  DefectReport rep = almost_zero_defect(M, killers);
  if (transfer) {
    const auto& alg = divisor.algebra();
    linalg::Span rel = ideal_span(alg, xs);
    for (const auto& w : M.window) rel.insert(w);
    bool ok = true;
    for (const auto& tm : transfer->multipliers)
      for (const auto& tn : transfer->multipliers)
        for (const auto& b : rep.colon_basis) ok = ok && rel.contains(to_vector(tm * tn * b));
    rep.transfer_verified = ok;
  }
  return rep;
}

DefectReport colon_defect(const TowerLevel& B, const std::vector<PolyElement>& sop, int i,
                          const TransferData* transfer) {
  return colon_defect(sop, i, tower_killers(B), transfer);
}

}  // namespace wittkit
