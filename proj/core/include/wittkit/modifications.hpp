#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/linalg.hpp"
#include "wittkit/membership.hpp"
#include "wittkit/module.hpp"

namespace wittkit {

/// x_{k+1} u_{k+1} = sum_{i<=k} x_i u_i in M. `xs` and `us` both have k+1
/// entries; the last one is the (k+1)-st.
struct ParameterRelation {
  int k = 0;
  std::vector<PolyElement> xs;
  std::vector<linalg::Vec> us;

  bool holds_in(const Module& M) const;
};

/// M' = M[X_1..X_k]_{<=N} / F R[X]_{<=N-1}, F = u_{k+1} - sum x_i X_i iota.
/// Coordinates of M' are blocks of M's coordinates, one block per monomial
/// in X of total degree <= N (block 0 is X^0).
struct Modification {
  Module source;
  ParameterRelation rel;
  int N = 0;
  std::vector<std::vector<int>> x_monomials;
  Module target;
  std::size_t denominator_generators = 0;  ///< C(N-1+k, k)

  std::size_t block_of(const std::vector<int>& exps) const;
  linalg::Vec track(const linalg::Vec& m) const;
  /// The vector v placed in the block of X^exps.
  linalg::Vec in_block(const linalg::Vec& v, const std::vector<int>& exps) const;
};

Modification build_modification(const Module& M, const ParameterRelation& rel, int N);

/// track(u_{k+1}) = sum x_i y_i + (relations of M'), with explicit y_i.
struct TrivializationCertificate {
  bool holds = false;
  std::vector<linalg::Vec> coefficients;  ///< y_1..y_k in M'

  /// Recomputes the identity in M' from scratch.
  bool verify(const Modification& mod) const;
};

TrivializationCertificate check_trivialization(const Modification& mod);

/// numerator / c^exponent in T[1/c].
struct LocalizedElement {
  PolyElement numerator;
  int exponent = 0;
};

/// Map from the coordinates of a module into T[1/c] with image inside
/// c^{-denom_exp} T.
struct BoundedMap {
  PolyElement c;
  int denom_exp = 0;
  std::vector<LocalizedElement> values;

  LocalizedElement evaluate(const Module& M, const linalg::Vec& v) const;
};

/// a/c^e == b/c^f, compared after clearing denominators.
bool localized_equal(const PolyElement& c, const LocalizedElement& a, const LocalizedElement& b);

/// Inclusion of T into T[1/c] written with exponent n: e_j -> (c^n b_j, n).
BoundedMap inclusion_map(const Module& M, const PolyElement& c, int n);

struct Lemma51Result {
  BoundedMap beta;
  std::vector<LocalizedElement> ts;       ///< t_i = c^N alpha(u_i), exponent 0
  MembershipCertificate hypothesis;       ///< c t_{k+1} in (x_1..x_k) T
  bool alpha_linear = false;
  bool square_commutes = false;           ///< beta(track(e_j)) == alpha(e_j) for all j
  bool kills_denominator = false;         ///< beta vanishes on every relation of M'
  bool beta_linear = false;
  std::int64_t bound = 0;                 ///< N D + D + N

  bool verified() const {
    return alpha_linear && square_commutes && kills_denominator && beta_linear && beta.denom_exp <= bound;
  }
};

/// Replays the commutative square. D is the degree bound of the
/// modification (mod.N); N is alpha.denom_exp. Throws AlmostCMViolation if
/// c t_{k+1} is not in (x_1..x_k) T at truncation.
Lemma51Result lemma51_beta(const Modification& mod, const BoundedMap& alpha);

struct ModificationSequence {
  Module start;
  std::vector<Modification> steps;
  bool bad = false;

  const Module& final_module() const { return steps.empty() ? start : steps.back().target; }
};

/// The smallest monomial of every variable: together with p they generate
/// the maximal ideal of a local truncated algebra.
std::vector<PolyElement> maximal_ideal_generators(const AlgebraPtr& alg);

/// True iff M_r = m M_r.
bool detect_bad_sequence(const ModificationSequence& seq, const std::vector<PolyElement>& maximal_ideal);

/// Basis of all relations x_{k+1} u_{k+1} = sum x_i u_i in M (syzygy kernel),
/// each returned as (u_1, ..., u_k, u_{k+1}).
std::vector<std::vector<linalg::Vec>> parameter_relations(const Module& M, const std::vector<PolyElement>& sop, int k);

/// Random relation of Koszul type: u_{k+1} = sum x_i a_i and
/// u_i = x_{k+1} a_i + sum_j x_j s_ij with s antisymmetric. These hold over
/// the untruncated ring, unlike kernel vectors such as p * p^{N-1} = 0.
ParameterRelation koszul_relation(const Module& M, const std::vector<PolyElement>& sop, int k, std::mt19937_64& rng);

/// `steps` modifications, each trivializing a random Koszul relation on a
/// random initial segment of `sop`. Deterministic in seed.
ModificationSequence random_admissible_sequence(const AlgebraPtr& T, const std::vector<PolyElement>& sop, int steps,
                                                int N, std::uint64_t seed);

}  // namespace wittkit
