#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace wittkit::linalg {

using Vec = std::vector<std::uint64_t>;

/// Arithmetic in Z/p^e with word-size residues.
class Zmod {
 public:
  Zmod(long p, int e);

  long p() const { return p_; }
  int exponent() const { return e_; }
  std::uint64_t modulus() const { return m_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % m_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + m_ - b) % m_; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : m_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m_);
  }
  /// p-adic valuation of a residue; `exponent()` for zero.
  int val(std::uint64_t a) const;
  std::uint64_t pow_p(int k) const { return pows_.at(static_cast<std::size_t>(k)); }
  /// Inverse of a unit (p does not divide a).
  std::uint64_t inverse(std::uint64_t a) const;
  /// Splits a = p^v * u with u a unit; returns u.
  std::uint64_t unit_part(std::uint64_t a, int v) const { return a / pows_[static_cast<std::size_t>(v)]; }

  void axpy(Vec& y, std::uint64_t a, const Vec& x) const;  ///< y += a x
  void scale(Vec& x, std::uint64_t a) const;

 private:
  long p_;
  int e_;
  std::uint64_t m_;
  std::vector<std::uint64_t> pows_;
};

/// Smith-form decomposition P A Q = diag(p^v_k) over Z/p^e. The columns of A
/// are generators; solve() expresses a vector as a combination of them.
class SmithSolver {
 public:
  /// `columns[j]` is the j-th column, each of length `rows`.
  SmithSolver(const Zmod& ring, std::size_t rows, const std::vector<Vec>& columns);

  std::optional<Vec> solve(const Vec& b) const;
  /// Generators of {x : A x = 0} as a Z/p^e-module.
  std::vector<Vec> kernel() const;
  std::size_t rank() const { return diag_.size(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  Zmod ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<int> diag_;
  std::vector<Vec> p_rows_;  // P, row-major
  std::vector<Vec> q_cols_;  // Q, column-major
};

/// Incrementally built Howell form of a Z/p^e-submodule; gives canonical
/// representatives and exact membership tests.
class Span {
 public:
  Span(const Zmod& ring, std::size_t dim);

  void insert(const Vec& v);
  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const;
  std::size_t dim() const { return dim_; }
  std::size_t pivot_count() const { return pivots_.size(); }
  /// Pivots with leading entry 1; equals dim_F_p of (span + pV)/pV.
  std::size_t unit_pivot_count() const;
  const Zmod& ring() const { return ring_; }

 private:
  Zmod ring_;
  std::size_t dim_;
  std::map<std::size_t, Vec> pivots_;
};

}  // namespace wittkit::linalg
