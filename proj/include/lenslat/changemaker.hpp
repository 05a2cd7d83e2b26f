#pragma once

// Changemaker vectors: recognition, enumeration, complement lattices, and
// torsion profiles read off from characteristic covectors of -Z^{n+1}.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lenslat/arith.hpp"
#include "lenslat/lattice_core.hpp"

namespace lenslat {

/// 4 d(P) for the Poincare sphere with the orientation that bounds -E8.
/// Never computed: this is the only value consistent with the step
/// 0 = c^2 + (n+1) - 8 for the all-(0,1) covector on -E8 (+) -Z^k.
inline constexpr Int kCorrectionP4 = 8;

enum class ChangemakerRule {
  /// sigma_i <= 1 + sum_{j<i} sigma_j for every i >= 0 (equivalent to full
  /// subset-sum coverage).
  kFullPrefix,
  /// sigma_i <= 1 + sum_{1<=j<i} sigma_j for i >= 1, the sum starting at
  /// index 1. Kept only to document how it differs.
  kLiteralFromOne,
};

namespace detail {
inline void require_nonnegative(std::span<const Int> v, const char* who) {
  if (std::any_of(v.begin(), v.end(), [](Int x) { return x < 0; }))
    throw std::invalid_argument(std::string(who) + ": entries must be nonnegative");
}
}  // namespace detail

inline bool is_changemaker(std::span<const Int> sigma, ChangemakerRule rule = ChangemakerRule::kFullPrefix) {
  detail::require_nonnegative(sigma, "is_changemaker");
  if (!std::is_sorted(sigma.begin(), sigma.end()))
    throw std::invalid_argument("is_changemaker: entries must be nondecreasing");
  Int prefix = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (rule == ChangemakerRule::kFullPrefix) {
      if (sigma[i] > prefix + 1) return false;
    } else if (i >= 1) {
      if (sigma[i] > prefix - sigma[0] + 1) return false;
    }
    prefix = checked::add(prefix, sigma[i]);
  }
  return true;
}

/// True iff the subset sums of tau are exactly {0, 1, ..., sum tau}.
/// Bitset dynamic programming over the reachable sums.
inline bool subset_sums_cover(std::span<const Int> tau) {
  detail::require_nonnegative(tau, "subset_sums_cover");
  Int total = 0;
  for (Int x : tau) total = checked::add(total, x);
  if (total > 50'000'000) throw std::invalid_argument("subset_sums_cover: total too large");
  std::vector<char> reach(static_cast<std::size_t>(total) + 1, 0);
  reach[0] = 1;
  Int hi = 0;
  for (Int x : tau) {
    if (x == 0) continue;
    for (Int s = hi; s >= 0; --s)
      if (reach[s]) reach[s + x] = 1;
    hi += x;
  }
  return std::all_of(reach.begin(), reach.end(), [](char c) { return c != 0; });
}

class Changemaker {
 public:
  explicit Changemaker(IntVector sigma) : sigma_(std::move(sigma)) {
    if (sigma_.empty()) throw std::invalid_argument("changemaker must have rank >= 1");
    if (!is_changemaker(sigma_)) throw std::invalid_argument("vector is not a changemaker");
    norm_ = dot(sigma_, sigma_);
  }

  const IntVector& sigma() const { return sigma_; }
  /// p = sum sigma_i^2 = |<sigma, sigma>|.
  Int norm() const { return norm_; }
  std::size_t rank() const { return sigma_.size(); }
  bool is_zero() const { return norm_ == 0; }
  std::size_t leading_zeros() const {
    return static_cast<std::size_t>(std::find_if(sigma_.begin(), sigma_.end(), [](Int x) { return x != 0; }) -
                                    sigma_.begin());
  }

  friend bool operator==(const Changemaker&, const Changemaker&) = default;

 private:
  IntVector sigma_;
  Int norm_ = 0;
};

/// All changemakers of exactly `rank` coordinates with sum sigma_i^2 = norm,
/// in lexicographic order. Leading zeros are allowed.
inline std::vector<Changemaker> enumerate_changemakers(Int norm, std::size_t rank) {
  if (norm < 1 || rank < 1) throw std::invalid_argument("enumerate_changemakers: norm and rank must be >= 1");
  std::vector<Changemaker> out;
  IntVector cur(rank, 0);
  auto rec = [&](auto&& self, std::size_t i, Int prev, Int prefix, Int left) -> void {
    if (i == rank) {
      if (left == 0) out.emplace_back(cur);
      return;
    }
    const Int slots = static_cast<Int>(rank - i);
    for (Int v = prev; v <= prefix + 1; ++v) {
      if (v * v * slots > left && v > 0) break;
      cur[i] = v;
      self(self, i + 1, v, prefix + v, left - v * v);
    }
  };
  rec(rec, 0, 0, 0, norm);
  return out;
}

/// All zero-free changemakers (sigma_0 >= 1) of the given norm, every rank.
inline std::vector<Changemaker> enumerate_zero_free(Int norm) {
  std::vector<Changemaker> out;
  for (std::size_t r = 1; r <= static_cast<std::size_t>(norm); ++r)
    for (auto& c : enumerate_changemakers(norm, r))
      if (c.sigma()[0] >= 1) out.push_back(std::move(c));
  return out;
}

/// Gram matrix of (sigma)^perp in -Z^rank.
inline GramLattice complement_lattice(const Changemaker& cm) {
  if (cm.is_zero()) throw std::invalid_argument("complement_lattice: zero changemaker");
  return orthogonal_complement(cm.sigma()).domain;
}

/// Raised when a congruence class has no characteristic covector inside the
/// search box.
class EmptyClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CharDefect {
  Int defect = 0;      // max of c^2 + (n+1) over the class, within the box
  IntVector witness;   // all-odd covector attaining it (lexicographically least)
  Int box = 0;
  bool box_binding = false;  // true when a covector outside the box could still do better
};

inline bool is_characteristic(std::span<const Int> c) {
  return std::all_of(c.begin(), c.end(), [](Int x) { return x % 2 != 0; });
}

/// Best characteristic covector of -Z^{n+1} in Spin^c class i of p-surgery
/// with tau = sigma, i.e. <c, sigma> + p = 2i (mod 2p), |c_j| <= box.
/// Exact residue dynamic programming; the witness is lexicographically least.
inline CharDefect min_char_defect(const Changemaker& cm, Int i, Int box = 5) {
  const Int p = cm.norm();
  if (p == 0) throw std::invalid_argument("min_char_defect: zero changemaker");
  if (i < 0 || 2 * i > p) throw std::invalid_argument("min_char_defect: class index out of range");
  if (box < 1) throw std::invalid_argument("min_char_defect: box must be >= 1");
  const Int m = 2 * p;
  const std::size_t n = cm.rank();
  const auto& sigma = cm.sigma();
  // sum c_j sigma_j = -<c, sigma> = p - 2i (mod 2p)
  const Int target = mod(p - 2 * i, m);

  std::vector<Int> values;
  for (Int c = -box; c <= box; ++c)
    if (c % 2 != 0) values.push_back(c);

  constexpr Int kInf = INT64_MAX / 4;
  // suffix[j][r]: least sum of squares over coordinates j.. reaching residue r
  std::vector<std::vector<Int>> suffix(n + 1, std::vector<Int>(static_cast<std::size_t>(m), kInf));
  suffix[n][0] = 0;
  for (std::size_t j = n; j-- > 0;) {
    for (Int r = 0; r < m; ++r) {
      Int best = kInf;
      for (Int c : values) {
        Int rest = suffix[j + 1][mod(r - c * sigma[j], m)];
        if (rest < kInf) best = std::min(best, rest + c * c);
      }
      suffix[j][r] = best;
    }
  }
  if (suffix[0][target] >= kInf)
    throw EmptyClassError("no characteristic covector in class " + std::to_string(i) + " within box " +
                          std::to_string(box));

  CharDefect out;
  out.box = box;
  out.witness.resize(n);
  Int r = target;
  for (std::size_t j = 0; j < n; ++j) {
    for (Int c : values) {
      Int nr = mod(r - c * sigma[j], m);
      if (suffix[j + 1][nr] < kInf && suffix[j + 1][nr] + c * c == suffix[j][r]) {
        out.witness[j] = c;
        r = nr;
        break;
      }
    }
  }
  const Int best = suffix[0][target];
  out.defect = static_cast<Int>(n) - best;
  out.box_binding = best > (box + 2) * (box + 2) + static_cast<Int>(n) - 1;
  return out;
}

/// Nonincreasing torsion sequence t_0, t_1, ... with t_i = 0 for i >= g.
struct TorsionProfile {
  std::vector<Int> t;
  Int g = 0;
  std::optional<Int> f;  // least i with t_i = 1

  Int at(Int i) const {
    Int k = i < 0 ? -i : i;
    return k < static_cast<Int>(t.size()) ? t[static_cast<std::size_t>(k)] : 0;
  }

  bool nonincreasing() const { return std::is_sorted(t.rbegin(), t.rend()); }

  friend bool operator==(const TorsionProfile&, const TorsionProfile&) = default;
};

inline std::optional<Int> first_index_of_one(const std::vector<Int>& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] == 1) return static_cast<Int>(i);
  return std::nullopt;
}

/// Torsion profile forced by sharpness when sigma is the image of the
/// 2-handle class: equality c^2 + (n+1) - 8 = -8 t_i for the best covector in
/// each class 0 <= i <= (p-1)/2, and g = (p+1)/2.
inline TorsionProfile cm_torsion_profile(const Changemaker& cm, Int box = 5) {
  const Int p = cm.norm();
  if (p % 2 == 0) throw std::invalid_argument("cm_torsion_profile: norm must be odd");
  TorsionProfile prof;
  prof.g = (p + 1) / 2;
  for (Int i = 0; i <= (p - 1) / 2; ++i) {
    Int d = min_char_defect(cm, i, box).defect;
    Int num = kCorrectionP4 - d;
    if (num % 8 != 0 || num < 0)
      throw std::domain_error("cm_torsion_profile: non-integral or negative t_" + std::to_string(i));
    prof.t.push_back(num / 8);
  }
  prof.f = first_index_of_one(prof.t);
  return prof;
}

}  // namespace lenslat
