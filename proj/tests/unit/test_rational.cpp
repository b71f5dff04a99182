#include <gtest/gtest.h>

#include "toricq/errors.hpp"
#include "toricq/rational.hpp"

using namespace toricq;

TEST(Rational, ParsesFractionsDecimalsAndExponents) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1e-3"), Rational(-1, 1000));
  EXPECT_EQ(parse_rational("1.5E2"), Rational(150));
  EXPECT_EQ(parse_rational(" 3/2 "), Rational(3, 2));
}

TEST(Rational, RejectsGarbage) {
  EXPECT_THROW(parse_rational(""), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational("1/2/3"), InputError);
}

TEST(Rational, FloorCeilAndPrinting) {
  EXPECT_EQ(floor_of(Rational(-1, 2)), Integer(-1));
  EXPECT_EQ(ceil_of(Rational(-1, 2)), Integer(0));
  EXPECT_EQ(floor_of(Rational(3)), Integer(3));
  EXPECT_EQ(ceil_of(Rational(7, 2)), Integer(4));
  EXPECT_EQ(to_string(Rational(3, 2)), "3/2");
  EXPECT_EQ(to_string(Rational(-4, 2)), "-2");
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
}

TEST(RationalMatrix, DeterminantRankSolveInverse) {
  const auto a = RationalMatrix::from_rows(std::vector<IntVector>{{2, 1}, {1, 2}});
  EXPECT_EQ(determinant(a), Rational(3));
  EXPECT_EQ(rank(a), 2u);
  const auto x = solve(a, {Rational(3), Rational(3)});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], Rational(1));
  EXPECT_EQ((*x)[1], Rational(1));
  const auto inv = inverse(a);
  ASSERT_TRUE(inv);
  EXPECT_EQ(*inv * a, RationalMatrix::identity(2));

  const auto singular = RationalMatrix::from_rows(std::vector<IntVector>{{1, 2}, {2, 4}});
  EXPECT_EQ(determinant(singular), Rational(0));
  EXPECT_EQ(rank(singular), 1u);
  EXPECT_FALSE(solve(singular, {Rational(1), Rational(1)}));
  EXPECT_FALSE(inverse(singular));
}

TEST(RationalMatrix, NullSpaceIsAnnihilated) {
  const auto a = RationalMatrix::from_rows(std::vector<IntVector>{{1, 1, 1}, {0, 1, 2}});
  const auto ns = null_space(a);
  ASSERT_EQ(ns.size(), 1u);
  const auto image = a * ns[0];
  for (const auto& v : image) EXPECT_EQ(v, Rational(0));
}

TEST(RationalMatrix, ThreeByThreeDeterminantMatchesCofactorExpansion) {
  const auto a = RationalMatrix::from_rows(std::vector<IntVector>{{2, -1, 3}, {0, 4, 1}, {5, 2, -2}});
  // 2(4*-2 - 1*2) - (-1)(0*-2 - 1*5) + 3(0*2 - 4*5) = -20 - 5 - 60
  EXPECT_EQ(determinant(a), Rational(-85));
}

TEST(Rational, GcdOfVectors) {
  EXPECT_EQ(gcd_of({4, -6, 10}), 2);
  EXPECT_EQ(gcd_of({0, 3}), 3);
  EXPECT_EQ(gcd_of({1, 0}), 1);
}
