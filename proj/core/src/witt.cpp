#include "wittkit/witt.hpp"

#include <atomic>
#include <deque>
#include <mutex>

namespace wittkit {

namespace {

std::atomic<int> g_index_cap{4};

struct Cache {
  std::mutex mu;
  std::map<long, AlgebraPtr> rings;
  std::map<std::pair<long, WittKind>, std::deque<PolyElement>> polys;
};

Cache& cache() {
  static Cache c;
  return c;
}

AlgebraPtr ring_locked(Cache& c, long p) {
  auto it = c.rings.find(p);
  if (it != c.rings.end()) return it->second;
  AlgebraSpec s;
  s.p = p;
  for (int i = 0; i <= kWittHardCap; ++i) s.vars.push_back({"X" + std::to_string(i), 1, true});
  for (int i = 0; i <= kWittHardCap; ++i) s.vars.push_back({"Y" + std::to_string(i), 1, true});
  auto alg = TruncatedAlgebra::create(s);
  c.rings.emplace(p, alg);
  return alg;
}

PolyElement ghost(const AlgebraPtr& ring, long p, int n, bool y) {
  PolyElement w = ring->zero();
  for (int j = 0; j <= n; ++j) {
    const auto e = ipow(p, static_cast<std::uint64_t>(n - j)).get_ui();
    w = w + ring->var((y ? "Y" : "X") + std::to_string(j)).pow(e) * ipow(p, static_cast<std::uint64_t>(j));
  }
  return w;
}

PolyElement divide_exact(const PolyElement& e, long p, int n, WittKind kind) {
  const Integer pn = ipow(p, static_cast<std::uint64_t>(n));
  Terms out;
  for (const auto& [m, c] : e.terms()) {
    if (mpz_divisible_p(c.get_mpz_t(), pn.get_mpz_t()) == 0)
      throw IntegralityFailure(std::string(to_string(kind)) + " polynomial at index " + std::to_string(n) +
                               " for p=" + std::to_string(p) + ": coefficient " + c.get_str() +
                               " not divisible by " + pn.get_str());
    Integer q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), pn.get_mpz_t());
    out.emplace(m, std::move(q));
  }
  return PolyElement(e.algebra(), std::move(out));
}

}  // namespace

const char* to_string(WittKind k) {
  switch (k) {
    case WittKind::Sum: return "sum";
    case WittKind::Product: return "product";
    case WittKind::Negation: return "negation";
    case WittKind::Frobenius: return "frobenius";
  }
  return "?";
}

void set_witt_index_cap(int n) {
  if (n < 0 || n > kWittHardCap)
    throw CapExceeded("Witt index cap must lie in [0, " + std::to_string(kWittHardCap) + "]");
  g_index_cap = n;
}

int witt_index_cap() { return g_index_cap; }

AlgebraPtr witt_polynomial_ring(long p) {
  auto& c = cache();
  std::lock_guard lock(c.mu);
  return ring_locked(c, p);
}

PolyElement ghost_polynomial(long p, int n, bool y) {
  if (n < 0 || n > kWittHardCap) throw CapExceeded("ghost index out of range");
  return ghost(witt_polynomial_ring(p), p, n, y);
}

const PolyElement& derive_witt_polynomial(long p, int n, WittKind kind) {
  if (n < 0) throw PreconditionViolation("negative Witt index");
  const int top = n + (kind == WittKind::Frobenius ? 1 : 0);
  if (top > kWittHardCap) throw CapExceeded("Witt index " + std::to_string(n) + " exceeds the supported range");
  auto& c = cache();
  std::lock_guard lock(c.mu);
  const auto ring = ring_locked(c, p);
  auto& list = c.polys[{p, kind}];
  while (static_cast<int>(list.size()) <= n) {
    const int i = static_cast<int>(list.size());
    PolyElement target = ring->zero();
    switch (kind) {
      case WittKind::Sum: target = ghost(ring, p, i, false) + ghost(ring, p, i, true); break;
      case WittKind::Product: target = ghost(ring, p, i, false) * ghost(ring, p, i, true); break;
      case WittKind::Negation: target = -ghost(ring, p, i, false); break;
      case WittKind::Frobenius: target = ghost(ring, p, i + 1, false); break;
    }
    for (int j = 0; j < i; ++j) {
      const auto e = ipow(p, static_cast<std::uint64_t>(i - j)).get_ui();
      target = target - list[static_cast<std::size_t>(j)].pow(e) * ipow(p, static_cast<std::uint64_t>(j));
    }
    list.push_back(divide_exact(target, p, i, kind));
  }
  return list[static_cast<std::size_t>(n)];
}

}  // namespace wittkit
