#include "wittkit/linalg.hpp"

#include <deque>
#include <utility>

#include "wittkit/errors.hpp"

namespace wittkit::linalg {

Zmod::Zmod(long p, int e) : p_(p), e_(e), m_(1) {
  if (p < 2 || e < 0) throw PreconditionViolation("bad modulus p^e");
  pows_.push_back(1);
  for (int i = 0; i < e; ++i) {
    if (m_ > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p)) throw CapExceeded("modulus exceeds 2^62");
    m_ *= static_cast<std::uint64_t>(p);
    pows_.push_back(m_);
  }
}

int Zmod::val(std::uint64_t a) const {
  if (a == 0) return e_;
  int v = 0;
  while (a % static_cast<std::uint64_t>(p_) == 0) {
    a /= static_cast<std::uint64_t>(p_);
    ++v;
  }
  return v;
}

std::uint64_t Zmod::inverse(std::uint64_t a) const {
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, new_t = 1;
  __int128 r = m_, new_r = a % m_;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    std::swap(t, new_t);
    new_t -= q * t;
    std::swap(r, new_r);
    new_r -= q * r;
  }
  if (r != 1 && m_ != 1) throw PreconditionViolation("residue is not a unit");
  if (t < 0) t += m_;
  return static_cast<std::uint64_t>(t % static_cast<__int128>(m_ == 0 ? 1 : m_));
}

void Zmod::axpy(Vec& y, std::uint64_t a, const Vec& x) const {
  if (a == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i] != 0) y[i] = add(y[i], mul(a, x[i]));
}

void Zmod::scale(Vec& x, std::uint64_t a) const {
  for (auto& v : x) v = mul(v, a);
}

// ---------------------------------------------------------------------------

SmithSolver::SmithSolver(const Zmod& ring, std::size_t rows, const std::vector<Vec>& columns)
    : ring_(ring), rows_(rows), cols_(columns.size()) {
  std::vector<Vec> a(rows_, Vec(cols_, 0));
  for (std::size_t j = 0; j < cols_; ++j) {
    if (columns[j].size() != rows_) throw PreconditionViolation("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) a[i][j] = columns[j][i] % ring_.modulus();
  }
  p_rows_.assign(rows_, Vec(rows_, 0));
  for (std::size_t i = 0; i < rows_; ++i) p_rows_[i][i] = 1 % ring_.modulus();
  q_cols_.assign(cols_, Vec(cols_, 0));
  for (std::size_t j = 0; j < cols_; ++j) q_cols_[j][j] = 1 % ring_.modulus();

  const int e = ring_.exponent();
  for (std::size_t r = 0; r < std::min(rows_, cols_); ++r) {
    int best = e;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = r; i < rows_ && best > 0; ++i) {
      for (std::size_t j = r; j < cols_; ++j) {
        if (a[i][j] == 0) continue;
        const int v = ring_.val(a[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == e) break;
    std::swap(a[r], a[bi]);
    std::swap(p_rows_[r], p_rows_[bi]);
    if (bj != r) {
      for (auto& row : a) std::swap(row[r], row[bj]);
      std::swap(q_cols_[r], q_cols_[bj]);
    }
    const std::uint64_t inv = ring_.inverse(ring_.unit_part(a[r][r], best));
    ring_.scale(a[r], inv);
    ring_.scale(p_rows_[r], inv);
    const std::uint64_t piv = ring_.pow_p(best);
    for (std::size_t i = r + 1; i < rows_; ++i) {
      if (a[i][r] == 0) continue;
      const std::uint64_t f = ring_.neg(a[i][r] / piv);
      for (std::size_t j = r; j < cols_; ++j)
        if (a[r][j] != 0) a[i][j] = ring_.add(a[i][j], ring_.mul(f, a[r][j]));
      ring_.axpy(p_rows_[i], f, p_rows_[r]);
    }
    for (std::size_t j = r + 1; j < cols_; ++j) {
      if (a[r][j] == 0) continue;
      const std::uint64_t f = ring_.neg(a[r][j] / piv);
      a[r][j] = 0;
      ring_.axpy(q_cols_[j], f, q_cols_[r]);
    }
    diag_.push_back(best);
  }
}

std::optional<Vec> SmithSolver::solve(const Vec& b) const {
  if (b.size() != rows_) throw PreconditionViolation("right-hand side length mismatch");
  Vec pb(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < rows_; ++k)
      if (p_rows_[i][k] != 0 && b[k] != 0) s = ring_.add(s, ring_.mul(p_rows_[i][k], b[k] % ring_.modulus()));
    pb[i] = s;
  }
  for (std::size_t i = diag_.size(); i < rows_; ++i)
    if (pb[i] != 0) return std::nullopt;
  Vec x(cols_, 0);
  for (std::size_t k = 0; k < diag_.size(); ++k) {
    if (pb[k] == 0) continue;
    if (ring_.val(pb[k]) < diag_[k]) return std::nullopt;
    const std::uint64_t y = pb[k] / ring_.pow_p(diag_[k]);
    ring_.axpy(x, y, q_cols_[k]);
  }
  return x;
}

std::vector<Vec> SmithSolver::kernel() const {
  std::vector<Vec> out;
  for (std::size_t k = 0; k < diag_.size(); ++k) {
    if (diag_[k] == 0) continue;
    Vec v = q_cols_[k];
    ring_.scale(v, ring_.pow_p(ring_.exponent() - diag_[k]));
    out.push_back(std::move(v));
  }
  for (std::size_t j = diag_.size(); j < cols_; ++j) out.push_back(q_cols_[j]);
  return out;
}

// ---------------------------------------------------------------------------

Span::Span(const Zmod& ring, std::size_t dim) : ring_(ring), dim_(dim) {}

Vec Span::reduce(Vec v) const {
  if (v.size() != dim_) throw PreconditionViolation("vector length mismatch");
  for (auto& x : v) x %= ring_.modulus();
  for (const auto& [c, row] : pivots_) {
    if (v[c] == 0) continue;
    const std::uint64_t piv = row[c];  // p^k
    const std::uint64_t q = v[c] / piv;
    if (q != 0) ring_.axpy(v, ring_.neg(q), row);
  }
  return v;
}

std::size_t Span::unit_pivot_count() const {
  std::size_t n = 0;
  for (const auto& [c, row] : pivots_) n += row[c] == 1 ? 1 : 0;
  return n;
}

bool Span::contains(const Vec& v) const {
  const Vec r = reduce(v);
  for (auto x : r)
    if (x != 0) return false;
  return true;
}

void Span::insert(const Vec& v0) {
  std::deque<Vec> queue{v0};
  while (!queue.empty()) {
    Vec v = reduce(std::move(queue.front()));
    queue.pop_front();
    std::size_t c = 0;
    while (c < dim_ && v[c] == 0) ++c;
    if (c == dim_) continue;
    const int k = ring_.val(v[c]);
    ring_.scale(v, ring_.inverse(ring_.unit_part(v[c], k)));
    auto it = pivots_.find(c);
    if (it != pivots_.end()) {
      queue.push_back(std::move(it->second));
      it->second = v;
    } else {
      pivots_.emplace(c, v);
    }
    if (k > 0) {
      Vec w = v;
      ring_.scale(w, ring_.pow_p(ring_.exponent() - k));
      queue.push_back(std::move(w));
    }
  }
}

}  // namespace wittkit::linalg
