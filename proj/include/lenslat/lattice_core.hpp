#pragma once

// Negative definite integer lattices: pairings in -Z^n, orthogonal
// complements, discriminants, short vectors, isometry testing, orthogonal
// decomposition and embeddings into diagonal lattices.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lenslat/arith.hpp"
#include "lenslat/ellipsoid.hpp"
#include "lenslat/matrix.hpp"

namespace lenslat {

inline constexpr std::size_t kDefaultMaxRank = 16;

/// Pairing in the negative diagonal lattice -Z^n: <v, w> = -sum v_j w_j.
inline Int pairing(std::span<const Int> v, std::span<const Int> w) {
  if (v.size() != w.size())
    throw std::invalid_argument("pairing: rank mismatch (" + std::to_string(v.size()) + " vs " +
                                std::to_string(w.size()) + ")");
  return checked::neg(dot(v, w));
}

/// Flip sign so the first nonzero coordinate is positive.
inline IntVector canonical_sign(IntVector v) {
  auto it = std::find_if(v.begin(), v.end(), [](Int x) { return x != 0; });
  if (it != v.end() && *it < 0)
    for (auto& x : v) x = -x;
  return v;
}

/// Integer lattice given by a Gram matrix. Construction rejects anything that
/// is not symmetric and negative definite.
class GramLattice {
 public:
  GramLattice() = default;

  explicit GramLattice(IntMatrix gram) : gram_(std::move(gram)) {
    if (!is_symmetric(gram_)) throw std::invalid_argument("Gram matrix must be square and symmetric");
    // Negative definite iff the k-th leading minor has sign (-1)^k.
    auto minors = leading_minors(gram_);
    for (std::size_t k = 0; k < minors.size(); ++k) {
      bool want_negative = (k % 2 == 0);
      if (minors[k] == 0 || (minors[k] < 0) != want_negative)
        throw std::invalid_argument("Gram matrix is not negative definite");
    }
  }

  std::size_t rank() const { return gram_.size(); }
  const IntMatrix& gram() const { return gram_; }

  /// u^T G v for coordinate vectors in this lattice's basis.
  Int pair(std::span<const Int> u, std::span<const Int> v) const {
    if (u.size() != rank() || v.size() != rank()) throw std::invalid_argument("pair: rank mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (u[i] == 0) continue;
      s = checked::add(s, checked::mul(u[i], dot(gram_[i], v)));
    }
    return s;
  }

  /// |<v, v>|.
  Int norm(std::span<const Int> v) const { return checked::neg(pair(v, v)); }

  /// -G, the positive definite form used for enumeration.
  IntMatrix positive_form() const {
    IntMatrix m = gram_;
    for (auto& row : m)
      for (auto& x : row) x = checked::neg(x);
    return m;
  }

  friend bool operator==(const GramLattice&, const GramLattice&) = default;

 private:
  IntMatrix gram_;
};

inline GramLattice direct_sum(std::span<const GramLattice> parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.rank();
  IntMatrix g = zero_matrix(n, n);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rank(); ++i)
      for (std::size_t j = 0; j < p.rank(); ++j) g[off + i][off + j] = p.gram()[i][j];
    off += p.rank();
  }
  return GramLattice(std::move(g));
}

inline GramLattice diagonal_lattice(std::size_t n) {
  IntMatrix g = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) g[i][i] = -1;
  return GramLattice(std::move(g));
}

/// The -E8 lattice, basis ordered as in the Froyshov/Donaldson dichotomy
/// for negative definite fillings of the Poincare sphere.
inline GramLattice e8() {
  return GramLattice(IntMatrix{
      {-2, 1, 1, 0, 1, 0, 0, 0},
      {1, -2, 0, 0, 0, 0, 0, 0},
      {1, 0, -2, 1, 0, 0, 0, 0},
      {0, 0, 1, -2, 0, 0, 0, 0},
      {1, 0, 0, 0, -2, 1, 0, 0},
      {0, 0, 0, 0, 1, -2, 1, 0},
      {0, 0, 0, 0, 0, 1, -2, 1},
      {0, 0, 0, 0, 0, 0, 1, -2},
  });
}

/// Lattice embedding witness: images[i] is the ambient vector in -Z^ambient_rank
/// assigned to the i-th basis vector of `domain`.
struct Embedding {
  GramLattice domain;
  std::size_t ambient_rank = 0;
  std::vector<IntVector> images;

  IntMatrix image_gram() const {
    IntMatrix g = zero_matrix(images.size(), images.size());
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t j = 0; j < images.size(); ++j) g[i][j] = pairing(images[i], images[j]);
    return g;
  }

  bool verify() const {
    if (images.size() != domain.rank()) return false;
    for (const auto& v : images)
      if (v.size() != ambient_rank) return false;
    return image_gram() == domain.gram();
  }
};

/// |det G|; 1 for the rank-0 lattice.
inline Int discriminant(const GramLattice& lattice) {
  Int d = bareiss_determinant(lattice.gram());
  return d < 0 ? checked::neg(d) : d;
}

namespace detail {

inline Embedding embedding_from_basis(std::size_t ambient, std::vector<IntVector> basis) {
  IntMatrix g = zero_matrix(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) g[i][j] = pairing(basis[i], basis[j]);
  return Embedding{GramLattice(std::move(g)), ambient, std::move(basis)};
}

/// Greedy pairwise size reduction: replace b_i by b_i -/+ b_j while that
/// strictly lowers its norm. `norm` maps a vector to a nonnegative integer.
template <class Norm>
void pair_reduce(std::vector<IntVector>& basis, Norm&& norm) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        for (int s : {-1, 1}) {
          IntVector t = basis[i];
          for (std::size_t k = 0; k < t.size(); ++k) t[k] = checked::add(t[k], s * basis[j][k]);
          if (norm(t) < norm(basis[i])) {
            basis[i] = std::move(t);
            changed = true;
          }
        }
      }
    }
  }
}

/// Minimum of sum c_j^2 over c >= 0 with sum_{j<i} c_j sigma_j = sigma_i, as
/// the vector sum c_j e_j - e_i; ties prefer larger coefficients on later
/// indices. nullopt when sigma_i is not representable.
inline std::optional<IntVector> standard_vector(std::span<const Int> sigma, std::size_t i) {
  constexpr Int kInf = INT64_MAX / 4;
  const Int target = sigma[i];
  if (target > 100000) return std::nullopt;
  std::vector<std::vector<Int>> best(i + 1, std::vector<Int>(static_cast<std::size_t>(target) + 1, kInf));
  best[0][0] = 0;
  for (std::size_t j = 0; j < i; ++j) {
    for (Int s = 0; s <= target; ++s) {
      Int b = kInf;
      if (sigma[j] == 0) {
        b = best[j][s];
      } else {
        for (Int c = 0; c * sigma[j] <= s; ++c) {
          Int prev = best[j][s - c * sigma[j]];
          if (prev < kInf) b = std::min(b, prev + c * c);
        }
      }
      best[j + 1][s] = b;
    }
  }
  if (best[i][target] >= kInf) return std::nullopt;
  IntVector v(sigma.size(), 0);
  v[i] = -1;
  Int s = target;
  for (std::size_t j = i; j-- > 0;) {
    if (sigma[j] == 0) continue;
    for (Int c = s / sigma[j]; c >= 0; --c) {
      Int prev = best[j][s - c * sigma[j]];
      if (prev < kInf && prev + c * c == best[j + 1][s]) {
        v[j] = c;
        s -= c * sigma[j];
        break;
      }
    }
  }
  return v;
}

/// Column reduction of the 1 x n row `sigma`: returns a unimodular U (as
/// columns) with sigma * U = (g, 0, ..., 0).
inline std::vector<IntVector> column_reduce(std::span<const Int> sigma) {
  const std::size_t n = sigma.size();
  std::vector<IntVector> cols(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) cols[i][i] = 1;
  IntVector row(sigma.begin(), sigma.end());
  for (std::size_t j = 1; j < n; ++j) {
    if (row[j] == 0) continue;
    if (row[0] == 0) {
      std::swap(cols[0], cols[j]);
      std::swap(row[0], row[j]);
      continue;
    }
    ExtGcd e = ext_gcd(row[0], row[j]);
    Int a = row[0] / e.g, b = row[j] / e.g;
    IntVector c0(n), cj(n);
    for (std::size_t k = 0; k < n; ++k) {
      c0[k] = checked::add(checked::mul(e.x, cols[0][k]), checked::mul(e.y, cols[j][k]));
      cj[k] = checked::sub(checked::mul(a, cols[j][k]), checked::mul(b, cols[0][k]));
    }
    cols[0] = std::move(c0);
    cols[j] = std::move(cj);
    row[0] = e.g;
    row[j] = 0;
  }
  return cols;
}

/// Order basis indices so that each next index pairs nontrivially with as
/// many already chosen ones as possible (prunes backtracking early).
inline std::vector<std::size_t> connectivity_order(const IntMatrix& gram) {
  const std::size_t n = gram.size();
  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    int pick_score = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      int score = 0;
      for (std::size_t u : order) score += gram[u][v] != 0;
      if (score > pick_score) {
        pick = v;
        pick_score = score;
      }
    }
    used[pick] = true;
    order.push_back(pick);
  }
  return order;
}

}  // namespace detail

/// Basis of the saturated sublattice {v : <v, sigma> = 0} of -Z^n.
///
/// When every entry is a nonnegative combination of earlier entries (always
/// true for changemakers) the basis is triangular: one minimal-norm vector
/// sum c_j e_j - e_i per index past the first nonzero entry, and e_i for zero
/// entries. Otherwise the kernel comes from integer column reduction followed
/// by pairwise size reduction. Saturation is checked in both cases.
inline Embedding orthogonal_complement(std::span<const Int> sigma) {
  const std::size_t n = sigma.size();
  if (std::any_of(sigma.begin(), sigma.end(), [](Int x) { return x < 0; }))
    throw std::invalid_argument("orthogonal_complement: entries must be nonnegative");
  Int g = 0;
  for (Int x : sigma) g = std::gcd(g, x);
  if (g == 0) throw std::invalid_argument("orthogonal_complement: zero vector");
  if (g != 1) throw std::invalid_argument("orthogonal_complement: vector is not primitive");

  std::vector<IntVector> basis;
  std::size_t first = 0;
  while (sigma[first] == 0) ++first;
  bool triangular = true;
  for (std::size_t i = 0; i < n && triangular; ++i) {
    if (sigma[i] == 0) {
      IntVector e(n, 0);
      e[i] = 1;
      basis.push_back(std::move(e));
    } else if (i > first) {
      auto v = detail::standard_vector(sigma, i);
      if (!v) triangular = false;
      else basis.push_back(std::move(*v));
    }
  }

  auto cols = detail::column_reduce(sigma);
  if (!triangular) {
    basis.assign(cols.begin() + 1, cols.end());
    detail::pair_reduce(basis, [](const IntVector& v) { return dot(v, v); });
  }

  // Saturation: together with a vector u, <u, sigma> = -1, the basis must be unimodular.
  IntMatrix check = basis;
  check.push_back(cols[0]);
  Int det = bareiss_determinant(check);
  if (det != 1 && det != -1) throw std::logic_error("orthogonal_complement: basis is not saturated");
  for (const auto& v : basis)
    if (pairing(v, sigma) != 0) throw std::logic_error("orthogonal_complement: basis vector not orthogonal");

  return detail::embedding_from_basis(n, std::move(basis));
}

/// Every nonzero v with |<v,v>| <= bound, one of each pair {v, -v} (first
/// nonzero coordinate positive), sorted by norm then lexicographically.
inline std::vector<IntVector> short_vectors(const GramLattice& lattice, Int bound) {
  std::vector<IntVector> out;
  if (lattice.rank() == 0 || bound <= 0) return out;
  EllipsoidEnumerator en(lattice.positive_form());
  en.for_each(Rational(bound), [&](const IntVector& x, const Rational&) {
    IntVector c = canonical_sign(x);
    if (c == x && std::any_of(x.begin(), x.end(), [](Int v) { return v != 0; })) out.push_back(x);
  });
  std::sort(out.begin(), out.end(), [&](const IntVector& a, const IntVector& b) {
    Int na = lattice.norm(a), nb = lattice.norm(b);
    return na != nb ? na < nb : a < b;
  });
  return out;
}

/// Basis-change witness for an isometry L1 -> L2: row i holds the L2
/// coordinates of the image of L1's i-th basis vector, so W G2 W^T = G1 and
/// |det W| = 1. nullopt when the lattices are not isometric.
inline std::optional<IntMatrix> is_isometric(const GramLattice& l1, const GramLattice& l2) {
  const std::size_t n = l1.rank();
  if (l2.rank() != n) return std::nullopt;
  if (n == 0) return IntMatrix{};
  if (discriminant(l1) != discriminant(l2)) return std::nullopt;
  if (l1.gram() == l2.gram()) return identity_matrix(n);

  // Search from a pairwise-reduced basis U of l1 (fewer, shorter candidate
  // images), then pull the witness back: W = U^{-1} W'.
  IntMatrix u = identity_matrix(n);
  detail::pair_reduce(u, [&](const IntVector& v) { return l1.norm(v); });
  IntMatrix u_inv(n, IntVector(n));
  {
    RationalMatrix r = rational_inverse(u);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u_inv[i][j] = r[i][j].num();
  }
  const IntMatrix g1 = multiply(multiply(u, l1.gram()), transpose(u));
  Int bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, -g1[i][i]);

  auto sv1 = short_vectors(GramLattice(g1), bound);
  auto sv2 = short_vectors(l2, bound);
  auto norm_counts = [](const GramLattice& l, const std::vector<IntVector>& sv) {
    std::map<Int, std::size_t> m;
    for (const auto& v : sv) ++m[l.norm(v)];
    return m;
  };
  if (norm_counts(GramLattice(g1), sv1) != norm_counts(l2, sv2)) return std::nullopt;

  std::map<Int, std::vector<IntVector>> by_norm;  // both signs; canonical first
  for (const auto& v : sv2) {
    IntVector m = v;
    for (auto& x : m) x = -x;
    auto& bucket = by_norm[l2.norm(v)];
    bucket.push_back(v);
    bucket.push_back(std::move(m));
  }

  auto order = detail::connectivity_order(g1);
  std::vector<IntVector> image(n), image_g2(n);
  std::optional<IntMatrix> found;

  auto rec = [&](auto&& self, std::size_t level) -> bool {
    if (level == n) {
      IntMatrix w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = image[i];
      Int d = bareiss_determinant(w);
      if (d == 1 || d == -1) {
        found = multiply(u_inv, w);
        return true;
      }
      return false;
    }
    const std::size_t v = order[level];
    auto it = by_norm.find(-g1[v][v]);
    if (it == by_norm.end()) return false;
    for (std::size_t c = 0; c < it->second.size(); ++c) {
      // The global sign symmetry lets the first image be canonical.
      if (level == 0 && c % 2 == 1) continue;
      const IntVector& cand = it->second[c];
      bool ok = true;
      for (std::size_t l = 0; l < level && ok; ++l) {
        std::size_t u = order[l];
        ok = dot(cand, image_g2[u]) == g1[v][u];
      }
      if (!ok) continue;
      image[v] = cand;
      image_g2[v] = mat_vec(l2.gram(), cand);
      if (self(self, level + 1)) return true;
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

/// The finest orthogonal decomposition of a negative definite lattice.
///
/// Basis vectors are split recursively as v = x + (v - x) with <x, v - x> = 0;
/// one of the two parts always has norm <= |v|/2, so short vectors up to half
/// the largest basis norm suffice. The indecomposable pieces generate the
/// lattice and each lies in a single summand, so the connected components of
/// their nonzero-pairing graph span the summands. Output is sorted by
/// (rank, discriminant, Gram).
inline std::vector<GramLattice> indecomposable_summands(const GramLattice& lattice,
                                                        std::size_t max_rank = kDefaultMaxRank) {
  const std::size_t n = lattice.rank();
  if (n > max_rank)
    throw std::invalid_argument("indecomposable_summands: rank " + std::to_string(n) + " exceeds maximum " +
                                std::to_string(max_rank));
  if (n == 0) return {};

  // Start from a pairwise-reduced basis so the short-vector bound stays small
  // even when the given basis is badly skewed.
  std::vector<IntVector> start = identity_matrix(n);
  detail::pair_reduce(start, [&](const IntVector& v) { return lattice.norm(v); });
  Int max_norm = 0;
  for (const auto& v : start) max_norm = std::max(max_norm, lattice.norm(v));
  std::vector<IntVector> shorts;
  for (const auto& v : short_vectors(lattice, max_norm / 2)) {
    shorts.push_back(v);
    IntVector m = v;
    for (auto& x : m) x = -x;
    shorts.push_back(std::move(m));
  }

  std::vector<IntVector> pieces;
  std::map<IntVector, bool> seen;
  auto split = [&](auto&& self, const IntVector& v) -> void {
    IntVector key = canonical_sign(v);
    if (seen.count(key)) return;
    seen[key] = true;
    const Int nv = lattice.norm(v);
    for (const auto& x : shorts) {
      if (lattice.norm(x) >= nv) break;
      if (lattice.pair(x, v) != lattice.pair(x, x)) continue;
      IntVector y = v;
      for (std::size_t k = 0; k < n; ++k) y[k] = checked::sub(y[k], x[k]);
      self(self, x);
      self(self, y);
      return;
    }
    pieces.push_back(key);
  };
  for (const auto& v : start) split(split, v);

  // Union-find over pieces.
  std::vector<std::size_t> parent(pieces.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < pieces.size(); ++a)
    for (std::size_t b = a + 1; b < pieces.size(); ++b)
      if (lattice.pair(pieces[a], pieces[b]) != 0) parent[find(a)] = find(b);

  std::map<std::size_t, std::vector<IntVector>> comps;
  for (std::size_t a = 0; a < pieces.size(); ++a) comps[find(a)].push_back(pieces[a]);

  std::vector<GramLattice> out;
  std::size_t total_rank = 0;
  Int total_disc = 1;
  for (auto& [root, vecs] : comps) {
    auto basis = hermite_basis(vecs);
    detail::pair_reduce(basis, [&](const IntVector& v) { return lattice.norm(v); });
    IntMatrix g = zero_matrix(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) g[i][j] = lattice.pair(basis[i], basis[j]);
    GramLattice part(std::move(g));
    total_rank += part.rank();
    total_disc = checked::mul(total_disc, discriminant(part));
    out.push_back(std::move(part));
  }
  if (total_rank != n || total_disc != discriminant(lattice))
    throw std::logic_error("indecomposable_summands: pieces do not decompose the lattice");

  std::sort(out.begin(), out.end(), [](const GramLattice& a, const GramLattice& b) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    Int da = discriminant(a), db = discriminant(b);
    if (da != db) return da < db;
    return a.gram() < b.gram();
  });
  return out;
}

/// All vectors of Z^n with sum of squares equal to `norm`, lexicographic.
inline std::vector<IntVector> vectors_of_norm(std::size_t n, Int norm) {
  std::vector<IntVector> out;
  IntVector cur(n, 0);
  auto rec = [&](auto&& self, std::size_t i, Int left) -> void {
    if (i == n) {
      if (left == 0) out.push_back(cur);
      return;
    }
    Int m = 0;
    while ((m + 1) * (m + 1) <= left) ++m;
    for (Int x = -m; x <= m; ++x) {
      cur[i] = x;
      self(self, i + 1, left - x * x);
    }
    cur[i] = 0;
  };
  rec(rec, 0, norm);
  return out;
}

/// Backtracking search for an embedding of `lattice` into -Z^n.
///
/// The first image is taken up to signed permutations of coordinates
/// (nonnegative and nonincreasing), which is the full automorphism group of
/// -Z^n. Deterministic: the first witness in lexicographic candidate order.
inline std::optional<Embedding> embeds_in_diagonal(const GramLattice& lattice, std::size_t n) {
  const std::size_t r = lattice.rank();
  if (r > n) throw std::invalid_argument("embeds_in_diagonal: rank exceeds ambient rank");
  if (r == 0) return Embedding{lattice, n, {}};

  const IntMatrix& g = lattice.gram();
  std::map<Int, std::vector<IntVector>> candidates;
  for (std::size_t i = 0; i < r; ++i) {
    Int k = -g[i][i];
    if (!candidates.count(k)) candidates[k] = vectors_of_norm(n, k);
  }
  auto order = detail::connectivity_order(g);
  std::vector<IntVector> image(r);
  bool ok_found = false;

  auto is_canonical = [](const IntVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0) return false;
      if (i > 0 && v[i] > v[i - 1]) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t level) -> bool {
    if (level == r) return true;
    const std::size_t v = order[level];
    for (const auto& cand : candidates[-g[v][v]]) {
      if (level == 0 && !is_canonical(cand)) continue;
      bool ok = true;
      for (std::size_t l = 0; l < level && ok; ++l) ok = pairing(cand, image[order[l]]) == g[v][order[l]];
      if (!ok) continue;
      image[v] = cand;
      if (self(self, level + 1)) return true;
    }
    return false;
  };
  ok_found = rec(rec, 0);
  if (!ok_found) return std::nullopt;
  return Embedding{lattice, n, image};
}

}  // namespace lenslat
