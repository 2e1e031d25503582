#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/linalg.hpp"

namespace wittkit {

/// Witness that `target` lies in the ideal generated by `generators`
/// (coefficients present) or the verdict that it does not, at truncation.
struct MembershipCertificate {
  PolyElement target;
  std::vector<PolyElement> generators;
  std::optional<std::vector<PolyElement>> coefficients;

  bool is_member() const { return coefficients.has_value(); }
  /// Recomputes sum q_i g_i exactly; false for non-member verdicts.
  bool verify() const;
};

linalg::Zmod model_ring(const AlgebraPtr& alg);
linalg::Vec to_vector(const PolyElement& x);
PolyElement from_vector(const AlgebraPtr& alg, const linalg::Vec& v);

/// Z/m-generators of the ideal (gens) inside the linear model, including the
/// model's own relations.
std::vector<linalg::Vec> ideal_columns(const AlgebraPtr& alg, const std::vector<PolyElement>& gens);

/// Howell span of the ideal generated by `gens`.
linalg::Span ideal_span(const AlgebraPtr& alg, const std::vector<PolyElement>& gens);

bool in_ideal(const PolyElement& x, const std::vector<PolyElement>& gens);

MembershipCertificate solve_linear_membership(const PolyElement& target, const std::vector<PolyElement>& gens);

/// Certificate built from known coefficients; verify() still recomputes.
MembershipCertificate make_certificate(PolyElement target, std::vector<PolyElement> gens,
                                       std::vector<PolyElement> coefficients);

/// Kernel of multiplication by `divisor` on A/(gens), modulo the truncation
/// window: elements that `divisor` pushes past the degree cap or the
/// coefficient precision are discarded, since they are annihilated only
/// because of truncation.
struct ColonModule {
  std::vector<PolyElement> basis;
  std::int64_t degree_window = 0;  ///< elements of scaled degree > this are ignored
  int precision_window = 0;        ///< elements divisible by p^this are ignored
  bool empty() const { return basis.empty(); }
};

ColonModule colon_submodule(const std::vector<PolyElement>& gens, const PolyElement& divisor);

/// Span of the truncation window used by colon_submodule for `divisor`.
std::vector<linalg::Vec> window_columns(const PolyElement& divisor, std::int64_t* degree_window = nullptr,
                                        int* precision_window = nullptr);

}  // namespace wittkit
