#pragma once

// Dense integer vectors/matrices and the exact linear algebra the lattice
// code needs: Bareiss determinants, rational inverses, row Hermite bases.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lenslat/arith.hpp"

namespace lenslat {

using IntVector = std::vector<Int>;
using IntMatrix = std::vector<IntVector>;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

inline IntMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, IntVector(cols, 0));
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline bool is_square(const IntMatrix& m) {
  return std::all_of(m.begin(), m.end(), [&](const IntVector& r) { return r.size() == m.size(); });
}

inline bool is_symmetric(const IntMatrix& m) {
  if (!is_square(m)) return false;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (m[i][j] != m[j][i]) return false;
  return true;
}

inline Int dot(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked::add(s, checked::mul(a[i], b[i]));
  return s;
}

inline IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t = zero_matrix(m[0].size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  std::size_t inner = b.size();
  std::size_t cols = b.empty() ? 0 : b[0].size();
  IntMatrix out = zero_matrix(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw std::invalid_argument("multiply: shape mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        out[i][j] = checked::add(out[i][j], checked::mul(a[i][k], b[k][j]));
    }
  }
  return out;
}

inline IntVector mat_vec(const IntMatrix& m, std::span<const Int> v) {
  IntVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
  return out;
}

/// Fraction-free (Bareiss) elimination. Returns the determinant and, through
/// `minors`, the leading principal minors d_1..d_n when no pivoting was
/// needed (minors is cleared otherwise).
inline Int bareiss_determinant(IntMatrix a, std::vector<Int>* minors = nullptr) {
  const std::size_t n = a.size();
  if (!is_square(a)) throw std::invalid_argument("determinant of a non-square matrix");
  if (minors) minors->clear();
  if (n == 0) return 1;
  Int sign = 1;
  Int prev = 1;
  bool pivoted = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) {
        if (minors) minors->clear();
        return 0;
      }
      std::swap(a[k], a[p]);
      sign = -sign;
      pivoted = true;
    }
    if (minors && !pivoted) minors->push_back(a[k][k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        __int128 v = static_cast<__int128>(a[i][j]) * a[k][k] - static_cast<__int128>(a[i][k]) * a[k][j];
        a[i][j] = checked::narrow(v / prev);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  if (minors && pivoted) minors->clear();
  return checked::mul(sign, a[n - 1][n - 1]);
}

/// Leading principal minors d_1..d_n computed independently of pivoting.
inline std::vector<Int> leading_minors(const IntMatrix& a) {
  std::vector<Int> out;
  out.reserve(a.size());
  for (std::size_t k = 1; k <= a.size(); ++k) {
    IntMatrix sub(k, IntVector(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[i][j];
    out.push_back(bareiss_determinant(std::move(sub)));
  }
  return out;
}

inline RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i].assign(m[i].begin(), m[i].end());
  return r;
}

/// Exact inverse by Gauss-Jordan over the rationals.
inline RationalMatrix rational_inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = to_rational(m);
  RationalMatrix inv(n, RationalVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].sign() == 0) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].sign() == 0) continue;
      Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Row-style Hermite normal form basis of the Z-span of `rows`.
/// Zero rows are dropped; the result is in echelon form with positive pivots
/// and entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_basis(IntMatrix rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    // gcd-combine every row below r into row r on column c.
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      if (rows[r][c] == 0) {
        std::swap(rows[r], rows[i]);
        continue;
      }
      Int a = rows[r][c], b = rows[i][c];
      ExtGcd e = ext_gcd(a, b);
      Int ag = a / e.g, bg = b / e.g;
      for (std::size_t j = 0; j < cols; ++j) {
        Int x = rows[r][j], y = rows[i][j];
        rows[r][j] = checked::add(checked::mul(e.x, x), checked::mul(e.y, y));
        rows[i][j] = checked::sub(checked::mul(ag, y), checked::mul(bg, x));
      }
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Int f = floor_div(rows[i][c], rows[r][c]);
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = checked::sub(rows[i][j], checked::mul(f, rows[r][j]));
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

}  // namespace lenslat
