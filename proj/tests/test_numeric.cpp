#include <gtest/gtest.h>

#include "anonmech/numeric.hpp"

namespace anonmech {
namespace {

TEST(ParseRational, AcceptsIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-2/3"), Rational(-2, 3));
  EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
  EXPECT_EQ(parse_rational("1.5e-3"), Rational(3, 2000));
}

TEST(ParseRational, RejectsGarbage) {
  EXPECT_THROW(parse_rational(""), NumberFormatError);
  EXPECT_THROW(parse_rational("abc"), NumberFormatError);
  EXPECT_THROW(parse_rational("1/0"), NumberFormatError);
  EXPECT_THROW(parse_rational("1/2/3"), NumberFormatError);
  EXPECT_THROW(parse_rational("."), NumberFormatError);
}

TEST(RationalFromDouble, UsesShortestDecimalSpelling) {
  EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
  EXPECT_EQ(rational_from_double(0.5), Rational(1, 2));
  EXPECT_EQ(rational_from_double(-3.0), Rational(-3));
}

TEST(ToDouble, RoundsToNearest) {
  EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_double(Rational(2, 3)), 2.0 / 3.0);
  EXPECT_EQ(to_double(Rational(1, 10)), 0.1);
}

TEST(NumericMode, RoundTripsNames) {
  EXPECT_EQ(parse_numeric_mode("rational"), NumericMode::Rational);
  EXPECT_EQ(parse_numeric_mode("float"), NumericMode::Float);
  EXPECT_EQ(to_string(NumericMode::Float), "float");
  EXPECT_THROW(parse_numeric_mode("double"), std::invalid_argument);
}

TEST(Tolerances, RationalInternalChecksAreExact) {
  EXPECT_EQ(internal_tol<Rational>(), Rational(0));
  EXPECT_GT(internal_tol<double>(), 0.0);
  EXPECT_TRUE(near_rel(1000.0, 1000.0 + 1e-7, 1e-9));
  EXPECT_FALSE(near(1000.0, 1000.0 + 1e-7, 1e-9));
}

}  // namespace
}  // namespace anonmech
