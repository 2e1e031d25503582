#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "wittkit/coefficient.hpp"

namespace wittkit {

inline constexpr int kMaxVars = 12;

/// Exponent vector scaled by p^level, prefixed by its weighted degree so the
/// natural ordering is graded-lexicographic.
struct Monomial {
  std::int64_t degree = 0;
  std::array<std::int32_t, kMaxVars> exps{};

  auto operator<=>(const Monomial&) const = default;
  bool is_one() const;
};

using Terms = std::map<Monomial, Integer>;

struct Variable {
  std::string name;
  int weight = 1;
  /// Ungraded variables do not count towards the degree cap; they must be
  /// bounded by a monic rewrite (e.g. pi -> p, z^2 -> ...).
  bool graded = true;
};

struct AlgebraSpec {
  long p = 2;
  Integer modulus = 0;  ///< 0 means coefficients in Z
  int level = 0;        ///< exponents live in (1/p^level) Z
  std::optional<std::int64_t> cap;  ///< degree cap D in unscaled units
  std::vector<Variable> vars;
};

class TruncatedAlgebra;
class PolyElement;
using AlgebraPtr = std::shared_ptr<const TruncatedAlgebra>;

/// Finite-dimensional model used by the linear-algebra layer: the algebra is
/// (Z/m)^basis modulo the span of `extra_relations`.
struct LinearModel {
  std::vector<Monomial> basis;
  std::map<Monomial, std::size_t> index;
  Integer modulus;
  std::uint64_t modulus_u64 = 0;
  int modulus_exponent = 0;  ///< modulus = p^modulus_exponent
  std::vector<std::vector<std::uint64_t>> extra_relations;
};

/// Coefficients mod p^N (or in Z), fractional exponents of level n, degree
/// cap D and a confluent family of rewrite rules.
class TruncatedAlgebra : public std::enable_shared_from_this<TruncatedAlgebra> {
 public:
  struct Rewrite {
    Monomial lead;
    Terms tail;
  };

  static AlgebraPtr create(AlgebraSpec spec);

  /// Returns a copy with extra rewrites `lead -> tail` (both given as elements
  /// of this algebra or of a relation-free algebra with the same variables).
  AlgebraPtr with_rewrites(const std::vector<std::pair<PolyElement, PolyElement>>& rules) const;
  /// Returns a copy in which the prime p is rewritten to G (ramified models).
  /// Coefficients become p-adic digits; requires modulus 0 and a degree cap.
  AlgebraPtr with_p_carry(const PolyElement& g) const;

  AlgebraPtr at_level(int level) const;
  AlgebraPtr with_modulus(Integer modulus) const;
  /// Same variables, level and cap; no relations; coefficients in Z.
  AlgebraPtr lift() const;

  long p() const { return spec_.p; }
  const Integer& modulus() const { return spec_.modulus; }
  int level() const { return spec_.level; }
  std::optional<std::int64_t> cap() const { return spec_.cap; }
  std::optional<std::int64_t> scaled_cap() const;
  std::int64_t scale() const { return scale_; }
  const AlgebraSpec& spec() const { return spec_; }
  const std::vector<Variable>& vars() const { return spec_.vars; }
  int nvars() const { return static_cast<int>(spec_.vars.size()); }
  std::optional<int> var_index(const std::string& name) const;
  const std::vector<Rewrite>& rewrites() const { return rewrites_; }
  const std::optional<Terms>& carry() const { return carry_; }
  bool has_relations() const { return !rewrites_.empty() || carry_.has_value(); }

  Monomial monomial(const std::array<std::int32_t, kMaxVars>& exps) const;
  Monomial one() const { return monomial({}); }
  Monomial var_monomial(int index, std::int32_t scaled_exp) const;
  Monomial multiply(const Monomial& a, const Monomial& b) const;

  /// Normal form modulo coefficient modulus, degree cap and relations.
  Terms normalize(Terms raw) const;

  bool is_finite() const;
  /// True when every ungraded variable is nilpotent (so the algebra is local
  /// with maximal ideal (p, variables)).
  bool is_local() const;
  /// p^M with p^M = 0 in the algebra; throws NotFiniteDimensional otherwise.
  Integer linear_modulus() const;
  const LinearModel& linear_model() const;

  /// p-adic precision actually available (N for mod-p^N models, the implied
  /// bound for ramified models, 0 for Z).
  int effective_precision() const;

  std::string describe() const;

  PolyElement zero() const;
  PolyElement unit() const;
  PolyElement constant(const Integer& c) const;
  PolyElement var(const std::string& name) const;
  /// x^(num / p^den_exp); den_exp must not exceed the level.
  PolyElement var_power(const std::string& name, std::int64_t num, int den_exp) const;

  bool same_shape(const TruncatedAlgebra& other) const;

  explicit TruncatedAlgebra(AlgebraSpec spec);  // use create()
  TruncatedAlgebra(const TruncatedAlgebra& other);
  TruncatedAlgebra& operator=(const TruncatedAlgebra&) = delete;

 private:
  void check_rewrites() const;
  Terms rescale_terms(const Terms& t, int from_level) const;

  AlgebraSpec spec_;
  std::int64_t scale_ = 1;
  std::vector<Rewrite> rewrites_;
  std::optional<Terms> carry_;

  mutable std::once_flag model_once_;
  mutable std::unique_ptr<LinearModel> model_;
  mutable std::once_flag local_once_;
  mutable bool local_ = false;
};

/// Element of a TruncatedAlgebra in normal form. Immutable after construction.
class PolyElement {
 public:
  PolyElement() = default;
  /// alg_reduce: normal form of a raw term map.
  PolyElement(AlgebraPtr alg, Terms raw);

  const AlgebraPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::size_t size() const { return terms_.size(); }
  Integer coefficient(const Monomial& m) const;
  Integer constant_term() const;
  /// Minimal degree over all terms (scaled units); nullopt for zero.
  std::optional<std::int64_t> order() const;
  /// Minimal p-adic valuation over all coefficients (capped by precision).
  int min_valuation() const;

  PolyElement operator+(const PolyElement& o) const;
  PolyElement operator-(const PolyElement& o) const;
  PolyElement operator-() const;
  PolyElement operator*(const PolyElement& o) const;
  PolyElement operator*(const Integer& c) const;
  PolyElement pow(std::uint64_t e) const;
  bool operator==(const PolyElement& o) const;
  bool operator!=(const PolyElement& o) const { return !(*this == o); }

  /// Re-express in `target`: variables matched by name, exponents rescaled
  /// to the target level, coefficients reduced there.
  PolyElement convert(const AlgebraPtr& target) const;

  std::string str() const;

 private:
  void check_same(const PolyElement& o) const;
  AlgebraPtr alg_;
  Terms terms_;
};

/// One raw term with rational exponents, the input format of alg_reduce.
struct RationalTerm {
  Integer coefficient;
  std::vector<mpq_class> exponents;
};

/// Normal form of a raw term list; throws ExponentLevelMismatch if an
/// exponent denominator does not divide p^level.
PolyElement alg_reduce(const std::vector<RationalTerm>& raw, const AlgebraPtr& alg);

/// Inverse of `e` if multiplication by e is invertible.
std::optional<PolyElement> is_unit(const PolyElement& e);

/// e / p^k. For mod-p^N algebras the result lives at precision N - k.
PolyElement exact_div_p(const PolyElement& e, int k);

/// Ring map sending each variable of `source` (by position) to an element of
/// the target algebra. Fractional exponents are supported when the image of
/// the variable is a single monomial with coefficient 1.
class RingMap {
 public:
  RingMap(AlgebraPtr source, AlgebraPtr target, std::vector<PolyElement> images);
  PolyElement operator()(const PolyElement& x) const;
  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }

 private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  std::vector<PolyElement> images_;
};

std::string format_exponent(std::int64_t scaled, long p, int level);

}  // namespace wittkit
