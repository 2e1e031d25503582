#include "wittkit/coefficient.hpp"

#include "wittkit/errors.hpp"

namespace wittkit {

Integer ipow(const Integer& base, std::uint64_t exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Integer ipow(long base, std::uint64_t exp) { return ipow(Integer(base), exp); }

int valuation(const Integer& value, long p, int cap) {
  if (value == 0) return cap;
  Integer v = value;
  int k = 0;
  while (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
    ++k;
  }
  return k;
}

Coefficient::Coefficient(Integer value, Integer modulus)
    : value_(std::move(value)), modulus_(std::move(modulus)) {
  if (modulus_ < 0) throw PreconditionViolation("negative modulus");
  normalize();
}

void Coefficient::normalize() {
  if (modulus_ != 0) mpz_fdiv_r(value_.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t());
}

static const Integer& common_modulus(const Coefficient& a, const Coefficient& b) {
  if (a.modulus() != b.modulus()) throw PreconditionViolation("coefficient moduli differ");
  return a.modulus();
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  return Coefficient(value_ + o.value_, common_modulus(*this, o));
}
Coefficient Coefficient::operator-(const Coefficient& o) const {
  return Coefficient(value_ - o.value_, common_modulus(*this, o));
}
Coefficient Coefficient::operator*(const Coefficient& o) const {
  return Coefficient(value_ * o.value_, common_modulus(*this, o));
}
Coefficient Coefficient::operator-() const { return Coefficient(-value_, modulus_); }

Coefficient Coefficient::pow(std::uint64_t e) const {
  if (modulus_ == 0) return Coefficient(ipow(value_, e));
  Integer out;
  mpz_powm_ui(out.get_mpz_t(), value_.get_mpz_t(), e, modulus_.get_mpz_t());
  return Coefficient(out, modulus_);
}

std::optional<Coefficient> Coefficient::inverse() const {
  if (modulus_ == 0) {
    if (value_ == 1 || value_ == -1) return *this;
    return std::nullopt;
  }
  Integer out;
  if (mpz_invert(out.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t()) == 0) {
    if (modulus_ == 1) return Coefficient(0, 1);
    return std::nullopt;
  }
  return Coefficient(out, modulus_);
}

}  // namespace wittkit
