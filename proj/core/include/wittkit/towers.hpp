#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/membership.hpp"

namespace wittkit {

enum class TowerKind { Valuation, Unramified, Ramified };

const char* to_string(TowerKind k);
TowerKind tower_kind_from_string(const std::string& s);

/// Parameters of a tower. For the valuation and unramified kinds the level
/// algebra is Z/p^N[pi^(1/p^n)][[x2^(1/p^n), ..., xd^(1/p^n)]] with pi = p;
/// for the ramified kind it is Z[[t1^(1/p^n), ..., td^(1/p^n)]]/(p - G)
/// truncated at degree D.
struct TowerSpec {
  TowerKind kind = TowerKind::Valuation;
  long p = 2;
  int d = 1;
  std::string G;  ///< ramified only, in t1..td
  int N = 4;
  std::int64_t D = 6;
};

/// Relation-free Z-algebra at level 0 in the tower's variables (cap D); G and
/// decompositions are written here.
AlgebraPtr tower_base_free(const TowerSpec& spec);

struct TowerLevel {
  TowerSpec spec;
  int n = 0;
  AlgebraPtr A;
  /// Same variables, no relations, coefficients in Z (cap D for ramified).
  AlgebraPtr lift;

  /// Embedding into `next` (level n+1 or any higher level of the same tower).
  PolyElement include(const PolyElement& e, const TowerLevel& next) const;
  /// pi_n = p^(1/p^n) for valuation/unramified, G_n = G(t^(1/p^n)) for ramified.
  PolyElement nilpotent_witness() const;
  /// Image in A of the representative `e` of the lift (or of the level-0 free algebra).
  PolyElement from_lift(const PolyElement& e) const;
};

/// Parses G and validates it for ramified specs.
PolyElement tower_G(const TowerSpec& spec);

TowerLevel build_level(const TowerSpec& spec, int n);

/// p-th root at level n+1 by the monomial rule: coefficient c -> c mod p,
/// exponent a -> a/p.
PolyElement frobenius_root(const PolyElement& e, const TowerLevel& level, const TowerLevel& next);

/// Same-algebra root, valid when every exponent of e is divisible by p at the
/// algebra's level; throws NoRootAtTruncation otherwise.
PolyElement frobenius_root_within(const PolyElement& e);

/// True when every coefficient of r^p - e is divisible by p (in the lift for
/// ramified towers). `r` lives at level n+1, `e` at level n.
bool verify_root(const PolyElement& e, const PolyElement& r, const TowerLevel& level, const TowerLevel& next);

struct RootRecord {
  std::string monomial;
  std::string root;
  bool verified = false;
  bool same_level_root = false;  ///< exponents already divisible by p
};

struct FrobeniusReport {
  int n = 0;
  std::int64_t up_to_degree = 0;
  std::vector<RootRecord> roots;
  std::size_t rooted = 0;
  std::size_t same_level_rooted = 0;
  std::string nilpotent;  ///< pi_n or G_n
  std::uint64_t nilpotency_bound = 0;  ///< p^n
  std::optional<std::uint64_t> nilpotency_exact;  ///< computed where cheap
  bool nilpotency_certified = false;
  bool witness_nonzero_mod_p = false;
  bool all_rooted() const { return rooted == roots.size(); }
};

FrobeniusReport frob_surjectivity_report(const TowerSpec& spec, int n, std::int64_t up_to_degree);

struct PBigWitness {
  std::vector<PolyElement> pis;
  std::vector<PolyElement> units;
  bool verified = false;
};

/// pi_0 = p, ..., pi_m with pi_{i+1}^p = pi_i u_i, all in the level-m algebra.
PBigWitness p_big_sequence(const TowerSpec& spec, int m);

struct Decomposition {
  std::vector<PolyElement> b;
  std::vector<PolyElement> b_prime;
};

/// p = G split term by term: c*t^a = (c*t_i) * t^(a - e_i).
Decomposition default_decomposition(const TowerSpec& spec);
/// Parses "b1*b1' + b2*b2' + ..." style pairs (each given as two strings).
Decomposition parse_decomposition(const TowerSpec& spec, const std::vector<std::pair<std::string, std::string>>& pairs);

struct Uniformizer {
  PolyElement pi;
  PolyElement u;
  PolyElement u_inverse;
  PolyElement f, g, h;  ///< lift representatives of the intermediate elements
  bool verified = false;
};

/// Builds pi, u with pi^p = p u, u a unit, at a ramified level n >= 1.
Uniformizer ramified_uniformizer(const TowerLevel& level, const Decomposition& dec);

struct WittPerfectWitness {
  PolyElement r;
  PolyElement s;
  std::uint64_t Nexp = 1;
  int level = 1;  ///< algebra level in which r lives
  MembershipCertificate congruence;  ///< r^p + p in (p s)
  MembershipCertificate power;       ///< s^N in (p)
  bool verified() const { return congruence.verify() && power.verify(); }
};

/// r, s, N of the criterion. Ramified towers use r = pi / v at level n + 1.
WittPerfectWitness witt_perfect_criterion(const TowerSpec& spec, int n = 1);

}  // namespace wittkit
