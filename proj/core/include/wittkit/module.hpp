#pragma once

#include <cstddef>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/linalg.hpp"
#include "wittkit/membership.hpp"

namespace wittkit {

/// Finite R-module presented as (Z/p^e)^dim modulo the span of `relations`,
/// with R acting through one matrix per variable (multiplication by the
/// variable's smallest monomial x^(1/p^level)). `iota` is a distinguished
/// element (the image of 1 when the module comes from an algebra).
struct Module {
  AlgebraPtr ring;
  linalg::Zmod zmod{2, 1};
  std::size_t dim = 0;
  std::vector<linalg::Vec> relations;
  /// action[i][j] = x_i * e_j
  std::vector<std::vector<linalg::Vec>> action;
  linalg::Vec iota;

  linalg::Vec zero() const { return linalg::Vec(dim, 0); }
  linalg::Vec basis_vector(std::size_t j) const;
  linalg::Vec act(const PolyElement& r, const linalg::Vec& v) const;
  linalg::Vec add(const linalg::Vec& a, const linalg::Vec& b) const;
  linalg::Vec sub(const linalg::Vec& a, const linalg::Vec& b) const;
  linalg::Vec scale(const linalg::Vec& a, std::uint64_t c) const;
  linalg::Span relation_span() const;
  bool is_zero(const linalg::Vec& v) const { return relation_span().contains(v); }
};

/// T viewed as a module over itself, pointed by 1.
Module module_from_algebra(const AlgebraPtr& T);
/// T^r, pointed by (1, 0, ..., 0).
Module free_module(const AlgebraPtr& T, std::size_t r);

linalg::Vec element_vector(const Module& M, const PolyElement& t);  // M from an algebra
PolyElement vector_element(const AlgebraPtr& T, const linalg::Vec& v);

/// dim_F_p of M / mM, where m is generated by p and `maximal_ideal`.
std::size_t minimal_generator_count(const Module& M, const std::vector<PolyElement>& maximal_ideal);

/// Kernel of multiplication by `divisor` on M / (xs) M, modulo M's relations
/// and the extra `window` vectors (truncation artefacts).
std::vector<linalg::Vec> module_colon(const Module& M, const std::vector<PolyElement>& xs,
                                      const PolyElement& divisor, const std::vector<linalg::Vec>& window = {});

}  // namespace wittkit
