#include <gtest/gtest.h>

#include <random>

#include "lenslat/lattice_core.hpp"
#include "lenslat/linear_lattice.hpp"
#include "oracles.hpp"

using namespace lenslat;

namespace {

GramLattice a2() { return GramLattice(IntMatrix{{-2, 1}, {1, -2}}); }

std::vector<GramLattice> corpus() {
  std::vector<GramLattice> out{
      a2(),
      GramLattice(IntMatrix{{-2, -1}, {-1, -2}}),
      GramLattice(IntMatrix{{-5}}),
      diagonal_lattice(3),
      linear_lattice(LensSpace(5, 4)),
      linear_lattice(LensSpace(7, 3)),
      GramLattice(IntMatrix{{-3, 1, 0, 0}, {1, -2, 1, 1}, {0, 1, -2, 0}, {0, 1, 0, -4}}),
      GramLattice(IntMatrix{{-1, 0, 0}, {0, -4, 2}, {0, 2, -3}}),
  };
  std::vector<GramLattice> parts{linear_lattice(LensSpace(3, 2)), linear_lattice(LensSpace(2, 1))};
  out.push_back(direct_sum(parts));
  for (IntVector s : {IntVector{1, 1, 2, 3}, IntVector{1, 2, 2, 4, 4}, IntVector{1, 1, 1, 2, 5}})
    out.push_back(orthogonal_complement(s).domain);
  return out;
}

}  // namespace

TEST(Pairing, NegativeDiagonal) {
  EXPECT_EQ(pairing(IntVector{1, 0}, IntVector{0, 1}), 0);
  EXPECT_EQ(pairing(IntVector{1, 1, 1}, IntVector{1, 1, 1}), -3);
  EXPECT_EQ(pairing(IntVector{1, 2, 3, 4}, IntVector{1, 2, 3, 4}), -30);
  EXPECT_THROW(pairing(IntVector{1}, IntVector{1, 2}), std::invalid_argument);
}

TEST(GramLattice, RejectsIndefiniteAndAsymmetric) {
  EXPECT_THROW(GramLattice(IntMatrix{{1}}), std::invalid_argument);
  EXPECT_THROW(GramLattice(IntMatrix{{-1, 2}, {2, -1}}), std::invalid_argument);
  EXPECT_THROW(GramLattice(IntMatrix{{-2, 1}, {0, -2}}), std::invalid_argument);
  EXPECT_THROW(GramLattice(IntMatrix{{-1, 0}, {0, 0}}), std::invalid_argument);
  EXPECT_NO_THROW(GramLattice(IntMatrix{}));
}

TEST(OrthogonalComplement, Examples) {
  auto c = orthogonal_complement(IntVector{1, 1, 1});
  EXPECT_EQ(c.images, (std::vector<IntVector>{{1, -1, 0}, {0, 1, -1}}));
  EXPECT_EQ(c.domain.gram(), (IntMatrix{{-2, 1}, {1, -2}}));
  EXPECT_TRUE(c.verify());

  EXPECT_EQ(orthogonal_complement(IntVector{1}).domain.rank(), 0u);

  auto d = orthogonal_complement(IntVector{1, 2});
  ASSERT_EQ(d.images.size(), 1u);
  EXPECT_EQ(canonical_sign(d.images[0]), (IntVector{2, -1}));
  EXPECT_EQ(d.domain.gram(), (IntMatrix{{-5}}));
}

TEST(OrthogonalComplement, Errors) {
  EXPECT_THROW(orthogonal_complement(IntVector{0, 0}), std::invalid_argument);
  EXPECT_THROW(orthogonal_complement(IntVector{2, 4}), std::invalid_argument);
  EXPECT_THROW(orthogonal_complement(IntVector{1, -1}), std::invalid_argument);
}

// Every small vector orthogonal to sigma lies in the returned span.
TEST(OrthogonalComplement, SaturatedAgainstBoxEnumeration) {
  for (IntVector sigma : {IntVector{1, 1, 1}, IntVector{1, 2}, IntVector{2, 3, 5}, IntVector{0, 1, 1, 2},
                          IntVector{3, 1, 2}}) {
    auto c = orthogonal_complement(sigma);
    const std::size_t n = sigma.size();
    IntVector v(n, -3);
    int tested = 0;
    while (true) {
      if (dot(v, sigma) == 0) {
        ++tested;
        EXPECT_TRUE(oracle::in_integer_span(c.images, v));
      }
      std::size_t j = 0;
      while (j < n && ++v[j] > 3) v[j++] = -3;
      if (j == n) break;
    }
    EXPECT_GT(tested, 1);
    for (const auto& b : c.images) EXPECT_EQ(dot(b, sigma), 0);
  }
}

// disc((sigma)^perp) = |<sigma, sigma>| for every primitive sigma, rank <= 6, entries <= 4.
TEST(OrthogonalComplement, DiscriminantEqualsNormExhaustive) {
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    IntVector v(n, 0);
    while (true) {
      Int g = 0;
      for (Int x : v) g = std::gcd(g, x);
      if (g == 1) {
        auto c = orthogonal_complement(v);
        ASSERT_EQ(c.domain.rank(), n - 1);
        ASSERT_EQ(discriminant(c.domain), dot(v, v)) << ::testing::PrintToString(v);
        ASSERT_TRUE(c.verify());
        ++count;
      }
      std::size_t j = 0;
      while (j < n && ++v[j] > 4) v[j++] = 0;
      if (j == n) break;
    }
  }
  EXPECT_GT(count, 15000u);
}

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant(a2()), 3);
  EXPECT_EQ(discriminant(GramLattice(IntMatrix{})), 1);
  EXPECT_EQ(discriminant(e8()), 1);
}

TEST(E8, MatrixIsVerbatim) {
  const IntMatrix expected{
      {-2, 1, 1, 0, 1, 0, 0, 0}, {1, -2, 0, 0, 0, 0, 0, 0}, {1, 0, -2, 1, 0, 0, 0, 0},
      {0, 0, 1, -2, 0, 0, 0, 0}, {1, 0, 0, 0, -2, 1, 0, 0}, {0, 0, 0, 0, 1, -2, 1, 0},
      {0, 0, 0, 0, 0, 1, -2, 1}, {0, 0, 0, 0, 0, 0, 1, -2},
  };
  EXPECT_EQ(e8().gram(), expected);
  EXPECT_EQ(bareiss_determinant(e8().gram()), 1);
}

TEST(ShortVectors, Examples) {
  EXPECT_EQ(short_vectors(GramLattice(IntMatrix{{-2}}), 2), (std::vector<IntVector>{{1}}));
  auto sv = short_vectors(a2(), 2);
  EXPECT_EQ(std::set<IntVector>(sv.begin(), sv.end()), (std::set<IntVector>{{1, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(short_vectors(e8(), 2).size(), 120u);
}

TEST(ShortVectors, AgreesWithBoxOracle) {
  for (const auto& l : corpus()) {
    if (l.rank() > 6) continue;
    for (Int bound : {1, 2, 3, 4, 6}) {
      auto sv = short_vectors(l, bound);
      std::set<IntVector> got(sv.begin(), sv.end());
      EXPECT_EQ(got.size(), sv.size()) << "duplicates";
      EXPECT_EQ(got, oracle::short_vectors(l.gram(), bound)) << ::testing::PrintToString(l.gram());
    }
  }
}

TEST(ShortVectors, SortedByNormThenLex) {
  auto sv = short_vectors(linear_lattice(LensSpace(7, 3)), 8);
  auto l = linear_lattice(LensSpace(7, 3));
  for (std::size_t i = 1; i < sv.size(); ++i) {
    Int a = l.norm(sv[i - 1]), b = l.norm(sv[i]);
    EXPECT_TRUE(a < b || (a == b && sv[i - 1] < sv[i]));
  }
}

namespace {
void expect_witness(const GramLattice& l1, const GramLattice& l2, const std::optional<IntMatrix>& w) {
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(oracle::congruent(*w, l2.gram()), l1.gram());
  Int d = bareiss_determinant(*w);
  EXPECT_TRUE(d == 1 || d == -1);
}
}  // namespace

TEST(IsIsometric, Examples) {
  auto w = is_isometric(a2(), a2());
  expect_witness(a2(), a2(), w);
  GramLattice flipped(IntMatrix{{-2, -1}, {-1, -2}});
  expect_witness(a2(), flipped, is_isometric(a2(), flipped));
  std::vector<GramLattice> parts{GramLattice(IntMatrix{{-1}}), GramLattice(IntMatrix{{-4}})};
  EXPECT_FALSE(is_isometric(GramLattice(IntMatrix{{-5}}), direct_sum(parts)).has_value());
  EXPECT_FALSE(is_isometric(a2(), diagonal_lattice(2)).has_value());
}

TEST(IsIsometric, EquivalenceRelationOnCorpus) {
  std::mt19937 rng(2024);
  auto c = corpus();
  for (const auto& l : c) {
    expect_witness(l, l, is_isometric(l, l));
    for (int t = 0; t < 3; ++t) {
      GramLattice moved(oracle::congruent(oracle::random_unimodular(l.rank(), rng), l.gram()));
      expect_witness(l, moved, is_isometric(l, moved));
      expect_witness(moved, l, is_isometric(moved, l));
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      bool ij = is_isometric(c[i], c[j]).has_value();
      bool ji = is_isometric(c[j], c[i]).has_value();
      EXPECT_EQ(ij, ji) << i << " " << j;
    }
}

TEST(IndecomposableSummands, Examples) {
  EXPECT_EQ(indecomposable_summands(diagonal_lattice(5)).size(), 5u);
  std::vector<GramLattice> parts{linear_lattice(LensSpace(3, 2)), linear_lattice(LensSpace(2, 1))};
  EXPECT_EQ(indecomposable_summands(direct_sum(parts)).size(), 2u);
  EXPECT_EQ(indecomposable_summands(e8()).size(), 1u);
  EXPECT_THROW(indecomposable_summands(diagonal_lattice(17)), std::invalid_argument);
  EXPECT_TRUE(indecomposable_summands(GramLattice(IntMatrix{})).empty());
}

// The summands reassemble to the input, also after hiding the splitting by a
// random change of basis.
TEST(IndecomposableSummands, PartitionProperty) {
  std::mt19937 rng(99);
  auto c = corpus();
  std::vector<GramLattice> e8z{e8(), diagonal_lattice(2)};
  c.push_back(direct_sum(e8z));
  for (const auto& l : c) {
    GramLattice hidden(oracle::congruent(oracle::random_unimodular(l.rank(), rng, 20), l.gram()));
    auto parts = indecomposable_summands(hidden);
    auto back = direct_sum(parts);
    EXPECT_TRUE(is_isometric(hidden, back).has_value());
    Int prod = 1;
    for (const auto& s : parts) prod *= discriminant(s);
    EXPECT_EQ(prod, discriminant(l));
    for (const auto& s : parts) EXPECT_EQ(indecomposable_summands(s).size(), 1u);
    auto again = indecomposable_summands(l);
    ASSERT_EQ(again.size(), parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      EXPECT_EQ(again[k].rank(), parts[k].rank());
      EXPECT_EQ(discriminant(again[k]), discriminant(parts[k]));
    }
  }
}

TEST(EmbedsInDiagonal, Examples) {
  auto e = embeds_in_diagonal(a2(), 3);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(e->verify());
  // Unique up to signed permutations of the coordinates of -Z^3.
  const std::vector<IntVector> want{{1, -1, 0}, {0, 1, -1}};
  std::vector<std::size_t> perm{0, 1, 2};
  bool matched = false;
  do {
    for (int signs = 0; signs < 8 && !matched; ++signs) {
      bool all = true;
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c) {
          Int s = (signs >> c & 1) ? -1 : 1;
          all = all && e->images[r][perm[c]] == s * want[r][c];
        }
      matched = all;
    }
  } while (!matched && std::next_permutation(perm.begin(), perm.end()));
  EXPECT_TRUE(matched) << ::testing::PrintToString(e->images);
  auto z = embeds_in_diagonal(GramLattice(IntMatrix{}), 4);
  ASSERT_TRUE(z.has_value());
  EXPECT_TRUE(z->images.empty());
  EXPECT_FALSE(embeds_in_diagonal(a2(), 2).has_value());
  EXPECT_THROW(embeds_in_diagonal(diagonal_lattice(3), 2), std::invalid_argument);
}

TEST(EmbedsInDiagonal, ChangemakerComplementsEmbedBack) {
  for (IntVector s : {IntVector{1, 1, 2, 3}, IntVector{1, 2, 2, 4}}) {
    auto c = orthogonal_complement(s);
    auto e = embeds_in_diagonal(c.domain, s.size());
    ASSERT_TRUE(e.has_value());
    EXPECT_TRUE(e->verify());
  }
}

TEST(EmbedsInDiagonal, E8DoesNotEmbedInRank8) { EXPECT_FALSE(embeds_in_diagonal(e8(), 8).has_value()); }
