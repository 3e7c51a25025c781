#include <gtest/gtest.h>

#include "anonmech/evaluator.hpp"
#include "anonmech/fixtures.hpp"
#include "oracles.hpp"
#include "printers.hpp"
#include "random_instances.hpp"

namespace anonmech {
namespace {

using Q = Rational;
using SF = StepFunction<Q>;

AllocationProfile<Q> ration_profile() {
  return {{SF::step(Q(1), true), SF::step(Q(2, 3), true, Q(1, 2))}};
}

AllocationProfile<Q> twogen_profile() {
  return {{SF::step(Q(1), true), SF::step(Q(1, 2), true)}};
}

TEST(Evaluator, RationingExampleFigures) {
  Evaluator<Q> ev(fixtures::ex_ration());
  auto e = ev.evaluate(ration_profile());
  // atoms {2/3, 1}: row t, column i.
  EXPECT_EQ(e.fstar[0], (std::vector<Q>{Q(0), Q(1)}));
  EXPECT_EQ(e.fstar[1], (std::vector<Q>{Q(1), Q(0)}));
  EXPECT_EQ(e.utility[0][1], Q(1, 6));
  EXPECT_EQ(e.utility[1][1], Q(1, 6));
  EXPECT_EQ(e.payments[0][1], Q(5, 6));
  EXPECT_EQ(e.payments[1][0], Q(1, 3));
  EXPECT_EQ(e.revenue, Q(7, 6));
  EXPECT_EQ(e.inventory_used, Q(3, 2));
  EXPECT_EQ(e.welfare, Q(4, 3));
  EXPECT_TRUE(e.negative_payments.empty());
  EXPECT_TRUE(ev.feasible(ration_profile(), Q(0)));
}

TEST(Evaluator, TwoGenerationExampleRevenue) {
  Evaluator<Q> ev(fixtures::ex_twogen());
  auto e = ev.evaluate(twogen_profile());
  EXPECT_EQ(e.revenue, Q(1));
  EXPECT_EQ(e.payments[0][1], Q(1, 2));
  EXPECT_EQ(e.payments[1][0], Q(1, 2));
  EXPECT_EQ(ev.revenue_and_inventory(twogen_profile()), std::make_pair(Q(1), Q(2)));
}

TEST(Evaluator, FreeFunctionsMatchMembers) {
  const Market m = fixtures::ex_ration();
  const auto a = ration_profile();
  Evaluator<Q> ev(m);
  EXPECT_EQ(revenue(m, a), ev.revenue(a));
  EXPECT_EQ(inventory_used(m, a), ev.inventory_used(a));
  EXPECT_EQ(welfare(m, a), ev.welfare(a));
  EXPECT_EQ(compute_fstar(m, a), ev.fstar(a));
  EXPECT_EQ(compute_payments(m, a), ev.payments(a));
  EXPECT_EQ(compute_utilities(m, a).size(), 3u);
}

TEST(Evaluator, RejectsProfileOfWrongLength) {
  Evaluator<Q> ev(fixtures::ex_ration());
  EXPECT_THROW(ev.evaluate(AllocationProfile<Q>::zeros(3)), std::invalid_argument);
}

TEST(Evaluator, ZeroAndOneProfiles) {
  Evaluator<Q> ev(fixtures::ex_ration());
  auto zero = ev.evaluate(AllocationProfile<Q>::zeros(2));
  EXPECT_EQ(zero.revenue, Q(0));
  EXPECT_EQ(zero.inventory_used, Q(0));
  auto one = ev.evaluate(AllocationProfile<Q>::ones(2));
  // Everyone is served on arrival for free.
  EXPECT_EQ(one.revenue, Q(0));
  EXPECT_EQ(one.inventory_used, Q(2));
  EXPECT_FALSE(ev.feasible(AllocationProfile<Q>::ones(2), Q(0)));
}

TEST(Evaluator, CsvHasOneRowPerAtomPeriod) {
  Evaluator<Q> ev(fixtures::ex_ration());
  auto csv = evaluation_csv(ev.instance(), ev.evaluate(ration_profile()));
  EXPECT_EQ(csv.rfind("t,v,fstar,r,U,p,cashflow\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("1,1,1,1,1/6,5/6,5/6"), std::string::npos);
}

TEST(Evaluator, MatchesSimulationOraclesOnRandomProfiles) {
  testing::RandomInstances gen(7);
  for (int n = 0; n < 40; ++n) {
    auto m = gen.market({.bounded = gen.coin(), .money_discounting = gen.coin()});
    auto a = gen.profile(m);
    Evaluator<Q> ev(m);
    auto e = ev.evaluate(a);
    EXPECT_EQ(e.revenue, testing::revenue_by_simulation(ev.instance(), a, e.payments));
    EXPECT_EQ(e.inventory_used, testing::inventory_by_simulation(ev.instance(), a));
    auto integral = testing::utility_by_integral(ev.instance(), a);
    integral.push_back(std::vector<Q>(m.atoms.size(), Q(0)));
    EXPECT_EQ(e.utility, integral) << testing::market_hash(m);
    EXPECT_TRUE(e.negative_payments.empty());
    for (const auto& row : e.payments) {
      for (const auto& p : row) EXPECT_GE(p, 0);
    }
  }
}

TEST(Evaluator, UtilityDifferenceNeedNotBeConvex) {
  // A free half-chance in period one followed by a posted price of 1/2.
  // The menu is incentive compatible, yet U_1 - U_2 has slopes 1/2 then 0.
  Market m = fixtures::ex_twogen();
  AllocationProfile<Q> a{{SF::constant(Q(1, 2)), SF::step(Q(1, 2), true)}};
  Evaluator<Q> ev(m);
  auto e = ev.evaluate(a);
  auto diff = e.utilities[0] - e.utilities[1];
  EXPECT_EQ(diff.right_slope(Q(1, 4)), Q(1, 2));
  EXPECT_EQ(diff.right_slope(Q(3, 4)), Q(0));
  EXPECT_FALSE(diff.is_convex(Q(0)));
  EXPECT_TRUE(e.utilities[0].is_convex(Q(0)));
  auto recursion = testing::utility_by_recursion(ev.instance(), a, e.utilities);
  for (std::size_t t = 0; t < 2; ++t) EXPECT_EQ(recursion[t], e.utility[t]);
}

TEST(Evaluator, FloatModeTracksRationalMode) {
  testing::RandomInstances gen(11);
  for (int n = 0; n < 20; ++n) {
    auto m = gen.market({.bounded = true, .money_discounting = true});
    auto a = gen.profile(m);
    auto exact = Evaluator<Q>(m).evaluate(a);
    auto approx = Evaluator<double>(m).evaluate(profile_cast<double>(a));
    EXPECT_NEAR(approx.revenue, to_double(exact.revenue), 1e-12);
    EXPECT_NEAR(approx.inventory_used, to_double(exact.inventory_used), 1e-12);
    EXPECT_NEAR(approx.welfare, to_double(exact.welfare), 1e-12);
  }
}

}  // namespace
}  // namespace anonmech
