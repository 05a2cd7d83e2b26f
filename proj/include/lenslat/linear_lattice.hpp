#pragma once

// Negative continued fractions, linear lattices of lens spaces, connected
// sums, and the search for changemaker embeddings of their lattices.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lenslat/arith.hpp"
#include "lenslat/changemaker.hpp"
#include "lenslat/lattice_core.hpp"
#include "lenslat/parallel.hpp"

namespace lenslat {

/// [x_1, ..., x_n]^- = x_1 - 1/(x_2 - 1/(... - 1/x_n)), every x_i >= 2.
struct ContinuedFraction {
  std::vector<Int> terms;
  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

/// L(p, q), oriented as -p/q surgery on the unknot. Always p > q >= 1, coprime.
struct LensSpace {
  Int p = 2;
  Int q = 1;

  LensSpace() = default;
  LensSpace(Int p_, Int q_) : p(p_), q(q_) {
    if (p < 2 || q < 1 || q >= p) throw std::invalid_argument("lens space needs p > q >= 1");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("lens space needs gcd(p, q) = 1");
  }

  /// -L(p, q) = L(p, p - q).
  LensSpace mirror() const { return p == 2 ? *this : LensSpace(p, p - q); }

  /// The orientation-preserving homeomorphic representative with the
  /// smaller of q and q^{-1} mod p.
  LensSpace canonical() const {
    ExtGcd e = ext_gcd(q, p);
    Int inv = mod(e.x, p);
    return LensSpace(p, std::min(q, inv));
  }

  std::string str() const { return "L(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

  friend auto operator<=>(const LensSpace&, const LensSpace&) = default;
};

struct LensSum {
  std::vector<LensSpace> summands;

  std::size_t m() const { return summands.size(); }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < summands.size(); ++i) s += (i ? "#" : "") + summands[i].str();
    return s;
  }

  /// "p1/q1+p2/q2+..." e.g. "2/1+3/2+5/4".
  static LensSum parse(std::string_view text) {
    LensSum out;
    std::string cleaned;
    for (char c : text)
      if (c != ' ' && c != '\t') cleaned += c;
    if (cleaned.empty()) throw std::invalid_argument("empty lens-sum");
    std::stringstream ss(cleaned);
    std::string item;
    while (std::getline(ss, item, '+')) {
      auto slash = item.find('/');
      if (item.empty() || slash == std::string::npos || slash == 0 || slash + 1 == item.size())
        throw std::invalid_argument("bad lens-sum term '" + item + "' (expected p/q)");
      auto num = [&](const std::string& t) {
        if (!std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw std::invalid_argument("bad lens-sum term '" + item + "'");
        return static_cast<Int>(std::stoll(t));
      };
      out.summands.emplace_back(num(item.substr(0, slash)), num(item.substr(slash + 1)));
    }
    if (cleaned.back() == '+') throw std::invalid_argument("trailing '+' in lens-sum");
    return out;
  }
};

inline ContinuedFraction neg_cf(Int p, Int q) {
  if (!(p > q && q >= 1)) throw std::invalid_argument("neg_cf needs p > q >= 1");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("neg_cf needs coprime p, q");
  ContinuedFraction cf;
  while (q != 0) {
    Int x = ceil_div(p, q);
    cf.terms.push_back(x);
    Int next = checked::sub(checked::mul(x, q), p);
    p = q;
    q = next;
  }
  return cf;
}

/// (p, q) in lowest terms. The empty expansion evaluates to the infinity
/// marker (1, 0).
inline std::pair<Int, Int> evaluate_cf(const ContinuedFraction& cf) {
  if (cf.terms.empty()) return {1, 0};
  for (Int x : cf.terms)
    if (x < 2) throw std::invalid_argument("evaluate_cf: terms must be >= 2");
  Int p = cf.terms.back(), q = 1;
  for (std::size_t k = cf.terms.size() - 1; k-- > 0;) {
    Int np = checked::sub(checked::mul(cf.terms[k], p), q);
    q = p;
    p = np;
  }
  return {p, q};
}

/// Intersection lattice of the linear plumbing bounded by L(p, q): chain of
/// unknots framed -x_1, ..., -x_n.
inline GramLattice linear_lattice(const LensSpace& ls) {
  auto terms = neg_cf(ls.p, ls.q).terms;
  const std::size_t n = terms.size();
  IntMatrix g = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i][i] = -terms[i];
    if (i + 1 < n) g[i][i + 1] = g[i + 1][i] = 1;
  }
  return GramLattice(std::move(g));
}

inline GramLattice connected_sum_lattice(const LensSum& sum) {
  if (sum.summands.empty()) throw std::invalid_argument("connected_sum_lattice: empty lens-sum");
  std::vector<GramLattice> parts;
  for (const auto& ls : sum.summands) parts.push_back(linear_lattice(ls));
  return direct_sum(parts);
}

/// |H_1| of the connected sum, the product of the p_i.
inline Int h1_order(const LensSum& sum) {
  Int out = 1;
  for (const auto& ls : sum.summands) out = checked::mul(out, ls.p);
  return out;
}

struct RealizeOptions {
  std::size_t pad = 0;  // extra zero coordinates; the target gains a -Z^pad summand
  std::size_t max_rank = kDefaultMaxRank;
  unsigned threads = 1;
};

struct Realization {
  std::optional<Changemaker> witness;
  std::optional<IntMatrix> isometry;   // rows: images of the target basis in complement coordinates
  std::uint64_t candidates_tested = 0;  // lexicographic position reached; all candidates when none
  std::uint64_t candidates_total = 0;
  std::size_t search_rank = 0;
  Int norm = 0;
};

/// First changemaker sigma (lexicographic) of rank rank(sum) + 1 + pad and
/// norm prod p_i whose complement is isometric to the connected-sum lattice
/// (plus -Z^pad). A "none" answer carries the number of candidates examined.
inline Realization is_changemaker_realizable(const LensSum& sum, const RealizeOptions& opt = {}) {
  if (opt.pad > 3) throw std::invalid_argument("realize: pad must be <= 3");
  GramLattice target = connected_sum_lattice(sum);
  if (opt.pad > 0) {
    std::vector<GramLattice> parts{target, diagonal_lattice(opt.pad)};
    target = direct_sum(parts);
  }
  if (target.rank() + 1 > opt.max_rank)
    throw std::invalid_argument("realize: rank " + std::to_string(target.rank()) + " above configured maximum");

  Realization out;
  out.norm = h1_order(sum);
  out.search_rank = target.rank() + 1;
  auto candidates = enumerate_changemakers(out.norm, out.search_rank);
  out.candidates_total = candidates.size();

  std::vector<std::optional<IntMatrix>> witnesses(candidates.size());
  auto hit = parallel_find_first(candidates.size(), opt.threads, [&](std::size_t i) {
    witnesses[i] = is_isometric(target, complement_lattice(candidates[i]));
    return witnesses[i].has_value();
  });
  if (hit) {
    out.witness = candidates[*hit];
    out.isometry = witnesses[*hit];
    out.candidates_tested = *hit + 1;
  } else {
    out.candidates_tested = candidates.size();
  }
  return out;
}

}  // namespace lenslat
