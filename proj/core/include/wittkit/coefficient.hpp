#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace wittkit {

using Integer = mpz_class;

Integer ipow(const Integer& base, std::uint64_t exp);
Integer ipow(long base, std::uint64_t exp);

/// p-adic valuation of a nonzero integer; `cap` is returned for zero.
int valuation(const Integer& value, long p, int cap);

/// Exact integer in Z (modulus 0) or a residue in Z/m. Values are normalized
/// into [0, m) whenever a modulus is present.
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(Integer value, Integer modulus = 0);
  static Coefficient integer(long v) { return Coefficient(Integer(v)); }

  const Integer& value() const { return value_; }
  const Integer& modulus() const { return modulus_; }
  bool has_modulus() const { return modulus_ != 0; }
  bool is_zero() const { return value_ == 0; }

  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-(const Coefficient& o) const;
  Coefficient operator*(const Coefficient& o) const;
  Coefficient operator-() const;
  Coefficient pow(std::uint64_t e) const;
  Coefficient with_value(Integer v) const { return Coefficient(std::move(v), modulus_); }

  /// Inverse in Z/m, or ±1 over Z. Empty when not invertible.
  std::optional<Coefficient> inverse() const;

  bool operator==(const Coefficient& o) const {
    return value_ == o.value_ && modulus_ == o.modulus_;
  }

  std::string str() const { return value_.get_str(); }

 private:
  void normalize();
  Integer value_ = 0;
  Integer modulus_ = 0;
};

}  // namespace wittkit
