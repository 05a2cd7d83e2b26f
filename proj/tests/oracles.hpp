#pragma once

// Brute-force reference implementations used only by the tests. Each one is
// deliberately naive and shares no code path with the library beyond the
// basic integer / rational types.

#include <cstdint>
#include <random>
#include <map>
#include <set>
#include <vector>

#include "lenslat/lenslat.hpp"

namespace oracle {

using lenslat::Int;
using lenslat::IntMatrix;
using lenslat::IntVector;
using lenslat::Rational;

/// Subset sums by explicit 2^n enumeration.
inline std::set<Int> subset_sums(const IntVector& tau) {
  std::set<Int> out;
  const std::size_t n = tau.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Int s = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) s += tau[j];
    out.insert(s);
  }
  return out;
}

inline bool covers(const IntVector& tau) {
  Int total = 0;
  for (Int x : tau) total += x;
  auto s = subset_sums(tau);
  return static_cast<Int>(s.size()) == total + 1;
}

/// All nondecreasing vectors of length `rank` with entries in [lo, hi].
inline std::vector<IntVector> nondecreasing(std::size_t rank, Int lo, Int hi) {
  std::vector<IntVector> out;
  IntVector cur(rank);
  auto rec = [&](auto&& self, std::size_t i, Int from) -> void {
    if (i == rank) {
      out.push_back(cur);
      return;
    }
    for (Int v = from; v <= hi; ++v) {
      cur[i] = v;
      self(self, i + 1, v);
    }
  };
  rec(rec, 0, lo);
  return out;
}

/// Changemakers of a given norm and rank via the subset-sum characterisation.
inline std::vector<IntVector> changemakers(Int norm, std::size_t rank) {
  Int hi = 0;
  while ((hi + 1) * (hi + 1) <= norm) ++hi;
  std::vector<IntVector> out;
  for (const auto& v : nondecreasing(rank, 0, hi)) {
    Int sq = 0;
    for (Int x : v) sq += x * x;
    if (sq == norm && covers(v)) out.push_back(v);
  }
  return out;
}

/// Is v in the Z-span of `rows`? Reduction against the Hermite basis.
inline bool in_integer_span(const IntMatrix& rows, IntVector v) {
  IntMatrix h = lenslat::hermite_basis(rows);
  for (const auto& row : h) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    if (v[c] % row[c] != 0) return false;
    Int k = v[c] / row[c];
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= k * row[j];
  }
  for (Int x : v)
    if (x != 0) return false;
  return true;
}

/// Integer square root floor.
inline Int isqrt(Int v) {
  Int r = 0;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// Nonzero x (one per +-pair) with |x^T G x| <= bound, by scanning the box
/// |x_i| <= sqrt(bound * ((-G)^{-1})_ii) (Cauchy-Schwarz).
inline std::set<IntVector> short_vectors(const IntMatrix& g, Int bound) {
  const std::size_t n = g.size();
  IntMatrix pos = g;
  for (auto& row : pos)
    for (auto& x : row) x = -x;
  auto inv = lenslat::rational_inverse(pos);
  IntVector lim(n);
  for (std::size_t i = 0; i < n; ++i) lim[i] = isqrt((Rational(bound) * inv[i][i]).floor()) + 1;
  std::set<IntVector> out;
  IntVector x(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      Int q = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) q += x[a] * pos[a][b] * x[b];
      if (q > 0 && q <= bound) out.insert(lenslat::canonical_sign(x));
      return;
    }
    for (Int v = -lim[i]; v <= lim[i]; ++v) {
      x[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Max of c^2 + (n+1) over all-odd c in [-box, box]^n in class
/// <c, sigma> + p = 2i (mod 2p). Returns {found, value}.
inline std::pair<bool, Int> char_defect(const IntVector& sigma, Int i, Int box) {
  const std::size_t n = sigma.size();
  Int p = 0;
  for (Int x : sigma) p += x * x;
  std::vector<Int> odd;
  for (Int c = -box; c <= box; ++c)
    if (c % 2 != 0) odd.push_back(c);
  bool found = false;
  Int best = 0;
  IntVector idx(n, 0);
  while (true) {
    Int s = 0, sq = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Int c = odd[static_cast<std::size_t>(idx[j])];
      s += c * sigma[j];
      sq += c * c;
    }
    if (lenslat::mod(-s + p - 2 * i, 2 * p) == 0) {
      Int val = -sq + static_cast<Int>(n);
      if (!found || val > best) best = val;
      found = true;
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == static_cast<Int>(odd.size())) idx[j++] = 0;
    if (j == n) break;
  }
  return {found, best};
}

/// p/q from continued-fraction terms by plain rational arithmetic.
inline Rational evaluate(const std::vector<Int>& terms) {
  Rational v = terms.back();
  for (std::size_t k = terms.size() - 1; k-- > 0;) v = Rational(terms[k]) - v.inverse();
  return v;
}

/// Random unimodular matrix: product of elementary row operations.
inline IntMatrix random_unimodular(std::size_t n, std::mt19937& rng, int steps = 12) {
  IntMatrix u = lenslat::identity_matrix(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<Int> coef(-1, 1);
  for (int s = 0; s < steps; ++s) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    Int k = coef(rng);
    for (std::size_t j = 0; j < n; ++j) u[a][j] += k * u[b][j];
  }
  if (coef(rng) > 0) std::swap(u[0], u[n - 1]);
  return u;
}

inline IntMatrix congruent(const IntMatrix& u, const IntMatrix& g) {
  return lenslat::multiply(lenslat::multiply(u, g), lenslat::transpose(u));
}

/// Max over characteristic covectors c of the Gram lattice G in each class
/// of Char / 2G of (c^2 + n)/4, by scanning all c with c_i = G_ii (mod 2)
/// and |c_i| <= 2 box + 1. Returns the class maxima (one entry per class met).
inline std::multiset<Rational> sharp_values_box(const IntMatrix& g, Int box) {
  const std::size_t n = g.size();
  auto inv = lenslat::rational_inverse(g);
  Int det = lenslat::bareiss_determinant(g);
  if (det < 0) det = -det;
  // class of c: (G^{-1} c) mod 2 Z^n, stored as a numerator vector over det
  std::map<std::vector<Int>, Rational> best;
  IntVector v(n, -box);
  while (true) {
    IntVector c(n);
    for (std::size_t a = 0; a < n; ++a) c[a] = 2 * v[a] + (g[a][a] % 2 != 0 ? 1 : 0);
    std::vector<Rational> y(n, Rational(0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) y[a] += inv[a][b] * Rational(c[b]);
    Rational sq(0);
    for (std::size_t a = 0; a < n; ++a) sq += y[a] * Rational(c[a]);
    std::vector<Int> key(n);
    for (std::size_t a = 0; a < n; ++a) key[a] = lenslat::mod((y[a] * Rational(det)).num(), 2 * det);
    Rational val = (sq + Rational(static_cast<Int>(n))) / Rational(4);
    auto it = best.find(key);
    if (it == best.end() || val > it->second) best[key] = val;
    std::size_t j = 0;
    while (j < n && ++v[j] > box) v[j++] = -box;
    if (j == n) break;
  }
  std::multiset<Rational> out;
  for (auto& [k, val] : best) out.insert(val);
  return out;
}

}  // namespace oracle
