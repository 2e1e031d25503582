#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/coefficient.hpp"
#include "wittkit/errors.hpp"
#include "wittkit/membership.hpp"

namespace wittkit {

enum class WittKind { Sum, Product, Negation, Frobenius };

const char* to_string(WittKind k);

/// Largest supported Witt index; the polynomial algebra has room for
/// X_0..X_5, Y_0..Y_5.
inline constexpr int kWittHardCap = 5;

/// Configurable length cap (default 4). Values above kWittHardCap are refused.
void set_witt_index_cap(int n);
int witt_index_cap();

/// Free Z-algebra on X_0..X_5, Y_0..Y_5 in which structure polynomials live.
AlgebraPtr witt_polynomial_ring(long p);

/// Universal polynomial of the given kind at index n. Derived by ghost
/// recursion with exact division by p^n, memoized per (p, kind).
/// Sum/Product use X_0..X_n, Y_0..Y_n; Negation uses X_0..X_n; Frobenius
/// uses X_0..X_{n+1}.
const PolyElement& derive_witt_polynomial(long p, int n, WittKind kind);

/// Ghost polynomial w_n(X) (or w_n(Y) when `y` is set) in witt_polynomial_ring(p).
PolyElement ghost_polynomial(long p, int n, bool y = false);

// ---------------------------------------------------------------------------
// Base-ring adapters.

template <class E>
struct BaseRing;

template <>
struct BaseRing<Coefficient> {
  static Coefficient constant(const Coefficient& like, const Integer& c) { return like.with_value(c); }
  static bool equal(const Coefficient& a, const Coefficient& b) { return a == b; }
  static std::optional<Coefficient> inverse(const Coefficient& a) { return a.inverse(); }
  static std::string str(const Coefficient& a) { return a.str(); }
};

template <>
struct BaseRing<PolyElement> {
  static PolyElement constant(const PolyElement& like, const Integer& c) { return like.algebra()->constant(c); }
  static bool equal(const PolyElement& a, const PolyElement& b) { return a == b; }
  static std::optional<PolyElement> inverse(const PolyElement& a) { return is_unit(a); }
  static std::string str(const PolyElement& a) { return a.str(); }
};

/// Evaluates an integer polynomial of witt_polynomial_ring(p) at X_i = xs[i],
/// Y_i = ys[i]; missing variables must not occur.
template <class E>
E evaluate_witt_polynomial(const PolyElement& poly, const std::vector<E>& xs, const std::vector<E>& ys,
                           const E& like) {
  using B = BaseRing<E>;
  const int half = kWittHardCap + 1;
  std::vector<std::vector<E>> powers(2 * half);
  auto power = [&](int var, std::int32_t e) -> const E& {
    const auto& base = var < half ? xs.at(static_cast<std::size_t>(var)) : ys.at(static_cast<std::size_t>(var - half));
    auto& cache = powers[static_cast<std::size_t>(var)];
    if (cache.empty()) cache.push_back(B::constant(like, 1));
    while (static_cast<std::int32_t>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[static_cast<std::size_t>(e)];
  };
  E sum = B::constant(like, 0);
  for (const auto& [m, c] : poly.terms()) {
    E term = B::constant(like, c);
    for (int v = 0; v < 2 * half; ++v)
      if (m.exps[v] != 0) term = term * power(v, m.exps[v]);
    sum = sum + term;
  }
  return sum;
}

// ---------------------------------------------------------------------------

/// Element of W_{p^n}(A) with components (a_0, ..., a_n).
template <class E>
class WittVector {
 public:
  WittVector(long p, std::vector<E> comps) : p_(p), comps_(std::move(comps)) {
    if (comps_.empty()) throw LengthMismatch("Witt vector needs at least one component");
  }

  long p() const { return p_; }
  int n() const { return static_cast<int>(comps_.size()) - 1; }
  const std::vector<E>& comps() const { return comps_; }
  const E& operator[](std::size_t i) const { return comps_.at(i); }

  bool operator==(const WittVector& o) const {
    if (p_ != o.p_ || comps_.size() != o.comps_.size()) return false;
    for (std::size_t i = 0; i < comps_.size(); ++i)
      if (!BaseRing<E>::equal(comps_[i], o.comps_[i])) return false;
    return true;
  }

  /// Textual form W[p=2;n=2](a0,a1,a2).
  std::string str() const {
    std::ostringstream os;
    os << "W[p=" << p_ << ";n=" << n() << "](";
    for (std::size_t i = 0; i < comps_.size(); ++i) os << (i ? "," : "") << BaseRing<E>::str(comps_[i]);
    os << ")";
    return os.str();
  }

 private:
  long p_;
  std::vector<E> comps_;
};

namespace detail {

template <class E>
void check_pair(const WittVector<E>& x, const WittVector<E>& y) {
  if (x.p() != y.p()) throw LengthMismatch("Witt vectors for different primes");
  if (x.n() != y.n()) throw LengthMismatch("Witt vector lengths differ");
}

template <class E>
void check_index(int n) {
  if (n > witt_index_cap())
    throw CapExceeded("Witt index " + std::to_string(n) + " exceeds cap " + std::to_string(witt_index_cap()));
}

template <class E>
WittVector<E> apply(const WittVector<E>& x, const WittVector<E>* y, WittKind kind, int out_n) {
  check_index<E>(out_n + (kind == WittKind::Frobenius ? 1 : 0));
  std::vector<E> out;
  const std::vector<E> none;
  for (int i = 0; i <= out_n; ++i)
    out.push_back(evaluate_witt_polynomial(derive_witt_polynomial(x.p(), i, kind), x.comps(),
                                           y ? y->comps() : none, x[0]));
  return WittVector<E>(x.p(), std::move(out));
}

}  // namespace detail

template <class E>
WittVector<E> witt_add(const WittVector<E>& x, const WittVector<E>& y) {
  detail::check_pair(x, y);
  return detail::apply(x, &y, WittKind::Sum, x.n());
}

template <class E>
WittVector<E> witt_mul(const WittVector<E>& x, const WittVector<E>& y) {
  detail::check_pair(x, y);
  return detail::apply(x, &y, WittKind::Product, x.n());
}

template <class E>
WittVector<E> witt_neg(const WittVector<E>& x) {
  if (x.p() != 2) {
    std::vector<E> out;
    for (const auto& a : x.comps()) out.push_back(-a);
    return WittVector<E>(x.p(), std::move(out));
  }
  return detail::apply<E>(x, nullptr, WittKind::Negation, x.n());
}

template <class E>
WittVector<E> witt_sub(const WittVector<E>& x, const WittVector<E>& y) {
  return witt_add(x, witt_neg(y));
}

/// W_{p^n}(A) -> W_{p^{n-1}}(A).
template <class E>
WittVector<E> witt_frobenius(const WittVector<E>& x) {
  if (x.n() == 0) throw LengthMismatch("Frobenius needs a vector of length at least 2");
  return detail::apply<E>(x, nullptr, WittKind::Frobenius, x.n() - 1);
}

/// Characteristic-p formula F(a_0, ..., a_n) = (a_0^p, ..., a_{n-1}^p).
template <class E>
WittVector<E> witt_frobenius_char_p(const WittVector<E>& x) {
  if (x.n() == 0) throw LengthMismatch("Frobenius needs a vector of length at least 2");
  std::vector<E> out;
  for (int i = 0; i < x.n(); ++i) out.push_back(x[static_cast<std::size_t>(i)].pow(static_cast<std::uint64_t>(x.p())));
  return WittVector<E>(x.p(), std::move(out));
}

/// V(a_0, ..., a_n) = (0, a_0, ..., a_n).
template <class E>
WittVector<E> witt_verschiebung(const WittVector<E>& x) {
  std::vector<E> out{BaseRing<E>::constant(x[0], 0)};
  out.insert(out.end(), x.comps().begin(), x.comps().end());
  return WittVector<E>(x.p(), std::move(out));
}

/// Restriction W_{p^n} -> W_{p^m}, m <= n.
template <class E>
WittVector<E> witt_truncate(const WittVector<E>& x, int m) {
  if (m < 0 || m > x.n()) throw LengthMismatch("cannot truncate to a longer vector");
  return WittVector<E>(x.p(), std::vector<E>(x.comps().begin(), x.comps().begin() + m + 1));
}

template <class E>
WittVector<E> teichmuller(long p, const E& a, int n) {
  std::vector<E> out{a};
  for (int i = 0; i < n; ++i) out.push_back(BaseRing<E>::constant(a, 0));
  return WittVector<E>(p, std::move(out));
}

template <class E>
WittVector<E> witt_zero(long p, const E& like, int n) {
  return teichmuller(p, BaseRing<E>::constant(like, 0), n);
}

template <class E>
WittVector<E> witt_one(long p, const E& like, int n) {
  return teichmuller(p, BaseRing<E>::constant(like, 1), n);
}

/// Ghost components w_i = sum_{j<=i} p^j a_j^{p^{i-j}}.
template <class E>
std::vector<E> ghost_map(const WittVector<E>& x) {
  using B = BaseRing<E>;
  std::vector<E> w;
  for (int i = 0; i <= x.n(); ++i) {
    E s = B::constant(x[0], 0);
    for (int j = 0; j <= i; ++j) {
      E t = x[static_cast<std::size_t>(j)].pow(static_cast<std::uint64_t>(ipow(x.p(), static_cast<std::uint64_t>(i - j)).get_ui()));
      s = s + t * B::constant(x[0], ipow(x.p(), static_cast<std::uint64_t>(j)));
    }
    w.push_back(s);
  }
  return w;
}

/// Inverse of the ghost map when p is invertible in the base ring.
template <class E>
WittVector<E> from_ghost(long p, const std::vector<E>& w) {
  using B = BaseRing<E>;
  if (w.empty()) throw LengthMismatch("empty ghost vector");
  auto pinv = B::inverse(B::constant(w[0], p));
  if (!pinv) throw PreconditionViolation("p is not invertible in the base ring");
  std::vector<E> a;
  E scale = B::constant(w[0], 1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    E s = w[i];
    for (std::size_t j = 0; j < i; ++j) {
      const auto e = ipow(p, static_cast<std::uint64_t>(i - j)).get_ui();
      s = s - a[j].pow(e) * B::constant(w[0], ipow(p, static_cast<std::uint64_t>(j)));
    }
    a.push_back(s * scale);
    scale = scale * *pinv;
  }
  return WittVector<E>(p, std::move(a));
}

}  // namespace wittkit
