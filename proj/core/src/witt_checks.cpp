#include "wittkit/witt_checks.hpp"

#include <map>

#include "wittkit/errors.hpp"

namespace wittkit {

using WV = WittVector<Coefficient>;

bool WittPropertyReport::pass() const {
  for (const auto& t : properties)
    if (t.failures != 0 || t.samples == 0) return false;
  return !properties.empty();
}

const PropertyTally& WittPropertyReport::at(const std::string& name) const {
  for (const auto& t : properties)
    if (t.name == name) return t;
  throw PreconditionViolation("no property named " + name);
}

WV random_witt_vector(long p, const Integer& modulus, int n, std::mt19937_64& rng, long range) {
  std::vector<Coefficient> c;
  const auto width = static_cast<std::uint64_t>(2 * range + 1);
  for (int i = 0; i <= n; ++i) c.emplace_back(Integer(static_cast<long>(rng() % width) - range), modulus);
  return WV(p, c);
}

WV witt_times(long k, const WV& x) {
  WV acc = witt_zero(x.p(), x[0], x.n());
  for (long i = 0; i < k; ++i) acc = witt_add(acc, x);
  return acc;
}

WittPropertyReport witt_property_suite(long p, int n, int samples, std::uint64_t seed, int modulus_exp) {
  if (n < 1 || n + 1 > witt_index_cap()) throw CapExceeded("property suite needs 1 <= n < index cap");
  WittPropertyReport rep{p, n, seed, {}};
  std::mt19937_64 rng(seed);
  std::map<std::string, PropertyTally> tally;
  std::vector<std::string> order;
  auto record = [&](const std::string& name, bool ok) {
    auto [it, fresh] = tally.try_emplace(name, PropertyTally{name, 0, 0});
    if (fresh) order.push_back(name);
    ++it->second.samples;
    if (!ok) ++it->second.failures;
  };
  const Integer mod = ipow(p, static_cast<std::uint64_t>(modulus_exp));
  for (const Integer& m : {Integer(0), mod}) {
    const std::string where = m == 0 ? "Z" : "Z/p^" + std::to_string(modulus_exp);
    for (int s = 0; s < samples; ++s) {
      const WV x = random_witt_vector(p, m, n, rng), y = random_witt_vector(p, m, n, rng),
               z = random_witt_vector(p, m, n, rng);
      const WV sum = witt_add(x, y), prod = witt_mul(x, y);
      const auto gx = ghost_map(x), gy = ghost_map(y), gs = ghost_map(sum), gp = ghost_map(prod);
      bool hom = true;
      for (int k = 0; k <= n; ++k) hom = hom && gs[k] == gx[k] + gy[k] && gp[k] == gx[k] * gy[k];
      record("ghost_hom/" + where, hom);
      record("add_assoc/" + where, witt_add(sum, z) == witt_add(x, witt_add(y, z)));
      record("mul_assoc/" + where, witt_mul(prod, z) == witt_mul(x, witt_mul(y, z)));
      record("distrib/" + where, witt_mul(x, witt_add(y, z)) == witt_add(prod, witt_mul(x, z)));
    }
  }
  for (int s = 0; s < samples; ++s) {
    const WV x = random_witt_vector(p, mod, n - 1, rng), y = random_witt_vector(p, mod, n, rng),
             z = random_witt_vector(p, mod, n, rng);
    record("FV=p", witt_frobenius(witt_verschiebung(x)) == witt_times(p, x));
    record("V(x)y=V(xF(y))", witt_mul(witt_verschiebung(x), y) == witt_verschiebung(witt_mul(x, witt_frobenius(y))));
    record("F_add", witt_frobenius(witt_add(y, z)) == witt_add(witt_frobenius(y), witt_frobenius(z)));
    record("F_mul", witt_frobenius(witt_mul(y, z)) == witt_mul(witt_frobenius(y), witt_frobenius(z)));
    const WV a = random_witt_vector(p, Integer(p), n, rng);
    record("F_char_p", witt_frobenius(a) == witt_frobenius_char_p(a));
  }
  for (const auto& name : order) rep.properties.push_back(tally.at(name));
  return rep;
}

std::vector<DerivationRecord> derive_all(long p, int n) {
  std::vector<DerivationRecord> out;
  std::vector<WittKind> kinds{WittKind::Sum, WittKind::Product, WittKind::Frobenius};
  if (p == 2) kinds.push_back(WittKind::Negation);
  for (int i = 0; i <= n; ++i)
    for (auto kind : kinds) {
      DerivationRecord r{p, i, kind, false, 0};
      try {
        r.terms = derive_witt_polynomial(p, i, kind).size();
        r.integral = true;
      } catch (const IntegralityFailure&) {
        r.integral = false;
      }
      out.push_back(r);
    }
  return out;
}

long witt_unit_additive_order(long p, int n, long limit) {
  const WV one = witt_one(p, Coefficient(Integer(0), p), n);
  const WV zero = witt_zero(p, one[0], n);
  WV acc = zero;
  for (long k = 1; k <= limit; ++k) {
    acc = witt_add(acc, one);
    if (acc == zero) return k;
  }
  return -1;
}

}  // namespace wittkit
