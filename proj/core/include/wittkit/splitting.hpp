#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/membership.hpp"
#include "wittkit/module.hpp"

namespace wittkit {

/// A module-finite R-algebra S, given as a truncated algebra together with
/// the structure map R -> S. The Z-basis of S's linear model plays the role
/// of the multiplication table's basis.
struct FiniteAlgebraPresentation {
  AlgebraPtr base;
  AlgebraPtr S;
  RingMap structure;
  /// Coefficients h_0..h_m (h_m = 1) over `base` when S = R[z]/(h).
  std::optional<std::vector<PolyElement>> monic;
  std::string generator;

  PolyElement one() const { return S->unit(); }
  PolyElement image(const PolyElement& r) const { return structure(r); }
};

/// S = R[z]/(h) for monic h given by its coefficients (lowest degree first).
/// R must not use a p-carry; its rewrites are copied into S.
FiniteAlgebraPresentation monogenic_extension(const AlgebraPtr& R, const std::vector<PolyElement>& h,
                                              const std::string& z = "z");

/// S with an explicit structure map (images of R's variables in S).
FiniteAlgebraPresentation presentation_from_map(const AlgebraPtr& R, const AlgebraPtr& S,
                                                const std::vector<PolyElement>& images);

/// S as an R-module, pointed by 1_S.
Module module_over_base(const FiniteAlgebraPresentation& P);

/// Associativity and unitality of the multiplication on the first
/// `max_basis` basis elements of S (all triples).
bool check_multiplication_table(const FiniteAlgebraPresentation& P, std::size_t max_basis = 12);

/// Free truncated power series over Z/p^N or F_p: the only bases treated as
/// regular by the monomial check.
bool is_regular_model(const AlgebraPtr& R);

struct MonomialCheck {
  int k = 0;
  MembershipCertificate certificate;  ///< (x_1..x_d)^k against (x_i^{k+1}) S
  bool member() const { return certificate.is_member(); }
};

struct RetractionMap {
  std::vector<PolyElement> values;  ///< phi(b_j) for the basis of S's model
  bool verified = false;

  PolyElement apply(const FiniteAlgebraPresentation& P, const PolyElement& s) const;
};

struct SplitVerdict {
  std::map<int, MonomialCheck> per_k;
  std::optional<RetractionMap> retraction;
  std::int64_t degree_window = 0;  ///< cap of S (scaled)
  int precision = 0;               ///< effective p-adic precision of S
};

/// Decides (x_1...x_d)^k in (x_1^{k+1}, ..., x_d^{k+1}) S for k = 1..k_max.
/// Refuses (PreconditionViolation) unless the base is a regular model.
std::map<int, MonomialCheck> monomial_check(const FiniteAlgebraPresentation& P, const std::vector<PolyElement>& sop,
                                            int k_max);

/// An R-linear phi: S -> R with phi(1_S) = 1, or nullopt at truncation.
std::optional<RetractionMap> retraction_solver(const FiniteAlgebraPresentation& P);

/// Determinant of a square matrix over a commutative ring (Laplace).
PolyElement determinant(const std::vector<std::vector<PolyElement>>& m);
/// Res(f, g) for coefficient lists over R (lowest degree first).
PolyElement sylvester_resultant(const std::vector<PolyElement>& f, const std::vector<PolyElement>& g);
/// disc(h) = (-1)^{m(m-1)/2} Res(h, h') for monic h of degree m.
PolyElement discriminant(const std::vector<PolyElement>& h);

enum class EtaleVerdict { Etale, NotEtaleAwayFromP };
std::string to_string(EtaleVerdict v);

struct EtaleReport {
  EtaleVerdict verdict = EtaleVerdict::NotEtaleAwayFromP;
  PolyElement disc;
  int a = -1;  ///< least a with p^a in (disc), when found
  std::optional<MembershipCertificate> certificate;
  int searched_up_to = 0;
};

/// Etale iff p^a lies in (disc h) R for some a <= a_max (and a below the
/// precision of R, where p^a is not already zero).
EtaleReport etale_away_from_p(const FiniteAlgebraPresentation& P, int a_max);

/// Runs all three checks; `consistent()` is the joint condition expected
/// for an etale extension of a regular base.
struct SplitSuite {
  EtaleReport etale;
  SplitVerdict split;
  bool consistent() const;
};

SplitSuite split_suite(const FiniteAlgebraPresentation& P, const std::vector<PolyElement>& sop, int k_max, int a_max);

}  // namespace wittkit
