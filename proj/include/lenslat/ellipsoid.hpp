#pragma once

// Exact Fincke-Pohst / Schnorr-Euchner enumeration of integer points in an
// ellipsoid { x : Q(x + t) <= R } for a positive definite integer form Q.
// All arithmetic is rational; no floating point.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lenslat/arith.hpp"
#include "lenslat/matrix.hpp"

namespace lenslat {

class EllipsoidEnumerator {
 public:
  /// `form` must be symmetric positive definite.
  explicit EllipsoidEnumerator(const IntMatrix& form) : n_(form.size()), q_(n_), mu_(n_, RationalVector(n_)) {
    if (!is_symmetric(form)) throw std::invalid_argument("ellipsoid form must be symmetric");
    // Q(x) = sum_i q_i (x_i + sum_{j>i} mu_ij x_j)^2
    for (std::size_t i = 0; i < n_; ++i) {
      Rational qi = form[i][i];
      for (std::size_t k = 0; k < i; ++k) qi -= q_[k] * mu_[k][i] * mu_[k][i];
      if (qi.sign() <= 0) throw std::invalid_argument("ellipsoid form is not positive definite");
      q_[i] = qi;
      for (std::size_t j = i + 1; j < n_; ++j) {
        Rational a = form[i][j];
        for (std::size_t k = 0; k < i; ++k) a -= q_[k] * mu_[k][i] * mu_[k][j];
        mu_[i][j] = a / qi;
      }
    }
  }

  std::size_t dimension() const { return n_; }

  /// Calls visit(x, Q(x + shift)) for every integer x with Q(x + shift) <= bound.
  /// An empty shift means zero. Visit order is deterministic.
  template <class Visit>
  void for_each(const Rational& bound, Visit&& visit, std::span<const Rational> shift = {}) const {
    State st(n_, shift);
    std::optional<Rational> b = bound;
    walk(st, n_, Rational(0), b, [&](const IntVector& x, const Rational& v) {
      visit(x, v);
      return false;
    });
  }

  /// A minimiser of Q(x + shift) over integer x and the minimum value.
  /// Ties resolve to the first point met in zig-zag order.
  std::pair<IntVector, Rational> closest(std::span<const Rational> shift = {}) const {
    State st(n_, shift);
    std::optional<Rational> best_value;
    IntVector best(n_, 0);
    if (n_ == 0) return {best, Rational(0)};
    walk(st, n_, Rational(0), best_value, [&](const IntVector& x, const Rational& v) {
      if (!best_value || v < *best_value) {
        best_value = v;
        best = x;
        return true;
      }
      return false;
    });
    return {best, *best_value};
  }

 private:
  struct State {
    State(std::size_t n, std::span<const Rational> shift) : x(n, 0), t(n, Rational(0)) {
      if (!shift.empty()) {
        if (shift.size() != n) throw std::invalid_argument("shift length mismatch");
        t.assign(shift.begin(), shift.end());
      }
    }
    IntVector x;
    RationalVector t;
  };

  // Leaf callback returns true when it tightened the bound (closest mode).
  template <class Leaf>
  void walk(State& st, std::size_t level, const Rational& partial, std::optional<Rational>& bound,
            Leaf&& leaf) const {
    if (level == 0) {
      leaf(st.x, partial);
      return;
    }
    const std::size_t i = level - 1;
    Rational center = -st.t[i];
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (mu_[i][j].sign() == 0) continue;
      center -= mu_[i][j] * (Rational(st.x[j]) + st.t[j]);
    }
    auto cost = [&](Int z) {
      Rational d = Rational(z) - center;
      return partial + q_[i] * d * d;
    };
    auto within = [&](const Rational& c) { return !bound || c <= *bound; };

    // Zig-zag outward from the nearest integer to the center.
    Int lo = center.floor();
    Int first = (center - Rational(lo)) * Rational(2) <= Rational(1) ? lo : lo + 1;
    Int up = first + 1, down = first - 1;
    bool up_alive = true, down_alive = true;
    Rational c0 = cost(first);
    if (within(c0)) {
      st.x[i] = first;
      walk(st, level - 1, c0, bound, leaf);
    } else {
      st.x[i] = 0;
      return;  // the nearest integer already exceeds the bound
    }
    while (up_alive || down_alive) {
      std::optional<Rational> cu, cd;
      if (up_alive) {
        cu = cost(up);
        if (!within(*cu)) up_alive = false;
      }
      if (down_alive) {
        cd = cost(down);
        if (!within(*cd)) down_alive = false;
      }
      if (!up_alive && !down_alive) break;
      bool take_up = up_alive && (!down_alive || *cu <= *cd);
      if (take_up) {
        st.x[i] = up++;
        walk(st, level - 1, *cu, bound, leaf);
      } else {
        st.x[i] = down--;
        walk(st, level - 1, *cd, bound, leaf);
      }
    }
    st.x[i] = 0;
  }

  std::size_t n_;
  RationalVector q_;
  RationalMatrix mu_;
};

namespace detail {
inline Int isqrt_floor(Int v) {
  if (v <= 0) return 0;
  Int r = static_cast<Int>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && static_cast<__int128>(r) * r > v) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}
}  // namespace detail

/// Exact closest vector for a tridiagonal positive definite form: minimises
/// Q(x + shift) by dynamic programming along the chain. Every coordinate is
/// confined to the certified box |x_k + t_k|^2 <= R (Q^{-1})_kk, where R is
/// the value at the rounded point, so the result is a true minimum. Ties
/// resolve to the smallest coordinates, last coordinate first.
inline std::pair<IntVector, Rational> tridiagonal_closest(const IntMatrix& form, std::span<const Rational> shift) {
  const std::size_t n = form.size();
  if (shift.size() != n) throw std::invalid_argument("shift length mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((i > j + 1 || j > i + 1) && form[i][j] != 0) throw std::invalid_argument("form is not tridiagonal");
  if (n == 0) return {{}, Rational(0)};
  EllipsoidEnumerator check(form);  // rejects non-definite input
  (void)check;

  auto value = [&](const IntVector& x) {
    Rational s(0);
    for (std::size_t i = 0; i < n; ++i) {
      Rational yi = Rational(x[i]) + shift[i];
      s += Rational(form[i][i]) * yi * yi;
      if (i + 1 < n && form[i][i + 1] != 0)
        s += Rational(2 * form[i][i + 1]) * yi * (Rational(x[i + 1]) + shift[i + 1]);
    }
    return s;
  };

  IntVector rounded(n);
  for (std::size_t i = 0; i < n; ++i) rounded[i] = (-shift[i] + Rational(1, 2)).floor();
  const Rational bound = value(rounded);
  RationalMatrix inv = rational_inverse(form);

  std::vector<IntVector> box(n);
  for (std::size_t k = 0; k < n; ++k) {
    Int r = detail::isqrt_floor((bound * inv[k][k]).ceil()) + 1;
    Rational center = -shift[k];
    for (Int x = (center - Rational(r)).floor(); x <= (center + Rational(r)).ceil(); ++x) {
      Rational y = Rational(x) + shift[k];
      if (y * y <= bound * inv[k][k]) box[k].push_back(x);
    }
    if (box[k].empty()) throw std::logic_error("tridiagonal_closest: empty coordinate box");
  }

  // best[k][a]: least partial value over coordinates 0..k with x_k = box[k][a].
  std::vector<std::vector<Rational>> best(n);
  std::vector<std::vector<std::size_t>> arg(n);
  for (std::size_t k = 0; k < n; ++k) {
    best[k].resize(box[k].size());
    arg[k].assign(box[k].size(), 0);
    for (std::size_t a = 0; a < box[k].size(); ++a) {
      Rational yk = Rational(box[k][a]) + shift[k];
      Rational own = Rational(form[k][k]) * yk * yk;
      if (k == 0) {
        best[k][a] = own;
        continue;
      }
      std::optional<Rational> m;
      for (std::size_t b = 0; b < box[k - 1].size(); ++b) {
        Rational yp = Rational(box[k - 1][b]) + shift[k - 1];
        Rational c = best[k - 1][b] + Rational(2 * form[k - 1][k]) * yp * yk;
        if (!m || c < *m) {
          m = c;
          arg[k][a] = b;
        }
      }
      best[k][a] = *m + own;
    }
  }
  std::size_t a = 0;
  for (std::size_t b = 1; b < best[n - 1].size(); ++b)
    if (best[n - 1][b] < best[n - 1][a]) a = b;
  Rational min_value = best[n - 1][a];
  IntVector x(n);
  for (std::size_t k = n; k-- > 0;) {
    x[k] = box[k][a];
    if (k > 0) a = arg[k][a];
  }
  return {x, min_value};
}

}  // namespace lenslat
