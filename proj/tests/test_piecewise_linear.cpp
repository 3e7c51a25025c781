#include <gtest/gtest.h>

#include "anonmech/piecewise_linear.hpp"

namespace anonmech {
namespace {

using Q = Rational;
using PL = PiecewiseLinear<Q>;

TEST(PiecewiseLinear, EvaluatesAndExtendsPastOne) {
  PL f({Q(0), Q(1, 2), Q(1)}, {Q(0), Q(1)});
  EXPECT_EQ(f(Q(1, 4)), Q(0));
  EXPECT_EQ(f(Q(3, 4)), Q(1, 4));
  EXPECT_EQ(f(Q(1)), Q(1, 2));
  EXPECT_EQ(f(Q(2)), Q(3, 2));
  EXPECT_EQ(f.knot_values(), (std::vector<Q>{Q(0), Q(0), Q(1, 2)}));
  EXPECT_EQ(f.right_slope(Q(1, 2)), Q(1));
  EXPECT_EQ(f.right_slope(Q(1, 4)), Q(0));
}

TEST(PiecewiseLinear, DifferenceUsesBothBreakpointSets) {
  PL f({Q(0), Q(1, 2), Q(1)}, {Q(1, 2), Q(1)});
  PL g({Q(0), Q(1, 3), Q(1)}, {Q(0), Q(1)});
  PL d = f - g;
  EXPECT_EQ(d.breakpoints(), (std::vector<Q>{Q(0), Q(1, 3), Q(1, 2), Q(1)}));
  for (Q v : {Q(0), Q(1, 5), Q(2, 5), Q(7, 10), Q(1)}) EXPECT_EQ(d(v), f(v) - g(v));
}

TEST(PiecewiseLinear, ConvexityAndSlopeBounds) {
  PL convex({Q(0), Q(1, 2), Q(1)}, {Q(1, 4), Q(3, 4)});
  PL concave({Q(0), Q(1, 2), Q(1)}, {Q(3, 4), Q(1, 4)});
  EXPECT_TRUE(convex.is_convex(Q(0)));
  EXPECT_FALSE(concave.is_convex(Q(0)));
  EXPECT_EQ(convex.max_slope(), Q(3, 4));
  EXPECT_EQ(convex.min_slope(), Q(1, 4));
  EXPECT_TRUE(PL::zero().is_convex(Q(0)));
  EXPECT_EQ(PL::zero()(Q(1, 2)), Q(0));
}

TEST(PiecewiseLinear, RejectsMalformedBreakpoints) {
  EXPECT_ANY_THROW(PL({Q(0), Q(1)}, {Q(1), Q(2)}));
  EXPECT_ANY_THROW(PL({Q(0), Q(1, 2), Q(1, 2), Q(1)}, {Q(0), Q(0), Q(0)}));
  EXPECT_ANY_THROW(PL({Q(1, 4), Q(1)}, {Q(0)}));
}

}  // namespace
}  // namespace anonmech
