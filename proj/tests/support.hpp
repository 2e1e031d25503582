#pragma once

#include <random>
#include <string>
#include <vector>

#include "wittkit/algebra.hpp"

namespace testsupport {

using namespace wittkit;

inline AlgebraPtr power_series(long p, int N, std::int64_t D, std::vector<std::string> names = {"x"}, int level = 0) {
  AlgebraSpec s;
  s.p = p;
  s.modulus = ipow(p, static_cast<std::uint64_t>(N));
  s.level = level;
  s.cap = D;
  for (auto& n : names) s.vars.push_back({n, 1, true});
  return TruncatedAlgebra::create(s);
}

/// Z/p^N[pi^(1/p^n)] with pi = p.
inline AlgebraPtr valuation_level(long p, int N, int n) {
  AlgebraSpec s;
  s.p = p;
  s.modulus = ipow(p, static_cast<std::uint64_t>(N));
  s.level = n;
  s.vars.push_back({"pi", 1, false});
  auto free = TruncatedAlgebra::create(s);
  return free->with_rewrites({{free->var("pi"), free->constant(p)}});
}

inline PolyElement random_element(const AlgebraPtr& alg, std::mt19937_64& rng, int terms = 4, long coeff = 50) {
  const auto& basis = alg->linear_model().basis;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<long> c(-coeff, coeff);
  Terms t;
  for (int i = 0; i < terms; ++i) t[basis[pick(rng)]] += c(rng);
  return PolyElement(alg, t);
}

}  // namespace testsupport
