#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wittkit/witt.hpp"

namespace wittkit {

/// Sample count and failures of one identity.
struct PropertyTally {
  std::string name;
  int samples = 0;
  int failures = 0;
};

struct WittPropertyReport {
  long p = 2;
  int n = 1;
  std::uint64_t seed = 0;
  std::vector<PropertyTally> properties;

  bool pass() const;
  const PropertyTally& at(const std::string& name) const;
};

/// Random Witt vector of index n with integer components in [-range, range]
/// reduced mod `modulus` (0 for Z). Deterministic in the generator state.
WittVector<Coefficient> random_witt_vector(long p, const Integer& modulus, int n, std::mt19937_64& rng,
                                           long range = 20);

/// x + x + ... + x (k times).
WittVector<Coefficient> witt_times(long k, const WittVector<Coefficient>& x);

/// Ghost homomorphism, ring axioms, F V = p, V(x) y = V(x F(y)), F a ring
/// map, and the char-p shortcut on `samples` random inputs at index n over Z
/// and Z/p^modulus_exp. Needs n + 1 <= the Witt index cap.
WittPropertyReport witt_property_suite(long p, int n, int samples, std::uint64_t seed, int modulus_exp = 6);

struct DerivationRecord {
  long p = 2;
  int n = 0;
  WittKind kind = WittKind::Sum;
  bool integral = false;
  std::size_t terms = 0;
};

/// Derives S_i, P_i, F_i (and negation for p = 2) for i <= n, recording
/// any IntegralityFailure instead of throwing.
std::vector<DerivationRecord> derive_all(long p, int n);

/// Additive order of 1 in W_{p^n}(F_p), counted up to `limit`.
long witt_unit_additive_order(long p, int n, long limit = 100000);

}  // namespace wittkit
