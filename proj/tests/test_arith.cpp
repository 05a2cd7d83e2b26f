#include <gtest/gtest.h>

#include <random>

#include "lenslat/arith.hpp"
#include "lenslat/matrix.hpp"
#include "oracles.hpp"

using namespace lenslat;

TEST(Rational, ReducesAndNormalisesSign) {
  Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(r.str(), "-3/4");
  EXPECT_EQ(Rational(0, 5).str(), "0/1");
}

TEST(Rational, ArithmeticIsExact) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_LT(b, a);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
}

TEST(Rational, ParseRoundTrip) {
  for (const char* s : {"3", "-3/2", "10/4", "0"}) {
    Rational r = Rational::parse(s);
    EXPECT_EQ(Rational::parse(r.str()), r) << s;
  }
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(Rational(0).inverse(), std::domain_error);
}

TEST(Checked, OverflowThrows) {
  const Int big = INT64_MAX / 2 + 1;
  EXPECT_THROW(checked::mul(big, 2), std::overflow_error);
  EXPECT_THROW(checked::add(INT64_MAX, 1), std::overflow_error);
  EXPECT_THROW(checked::neg(INT64_MIN), std::overflow_error);
  EXPECT_THROW(Rational(INT64_MAX) + Rational(1), std::overflow_error);
  EXPECT_EQ(checked::mul(-3, 4), -12);
}

TEST(Checked, FloorModGcd) {
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(ceil_div(7, 2), 4);
  EXPECT_EQ(mod(-1, 5), 4);
  for (Int a = -20; a <= 20; ++a)
    for (Int b = 1; b <= 20; ++b) {
      auto e = ext_gcd(a, b);
      EXPECT_EQ(e.g, std::gcd(a, b));
      EXPECT_EQ(a * e.x + b * e.y, e.g);
    }
}

namespace {
Int cofactor_det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Int d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      IntVector row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    d += (j % 2 ? -1 : 1) * m[0][j] * cofactor_det(minor);
  }
  return d;
}
}  // namespace

TEST(Matrix, BareissMatchesCofactorExpansion) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<Int> e(-4, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = static_cast<std::size_t>(trial % 6);
    IntMatrix m = zero_matrix(n, n);
    for (auto& row : m)
      for (auto& x : row) x = e(rng);
    EXPECT_EQ(bareiss_determinant(m), cofactor_det(m));
  }
}

TEST(Matrix, RationalInverse) {
  IntMatrix m{{-2, 1, 0}, {1, -2, 1}, {0, 1, -3}};
  auto inv = rational_inverse(m);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Rational s(0);
      for (std::size_t k = 0; k < 3; ++k) s += Rational(m[i][k]) * inv[k][j];
      EXPECT_EQ(s, Rational(i == j ? 1 : 0));
    }
  EXPECT_THROW(rational_inverse(IntMatrix{{1, 2}, {2, 4}}), std::domain_error);
}

TEST(Matrix, HermiteBasisSpansSameLattice) {
  IntMatrix rows{{2, 4, 6}, {1, 1, 1}, {3, 5, 7}};
  IntMatrix h = hermite_basis(rows);
  ASSERT_EQ(h.size(), 2u);
  for (const auto& r : rows) EXPECT_TRUE(oracle::in_integer_span(h, r));
  for (const auto& r : h) EXPECT_TRUE(oracle::in_integer_span(rows, r));
  EXPECT_FALSE(oracle::in_integer_span(h, IntVector{1, 0, 0}));
}
