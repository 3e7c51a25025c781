#include <gtest/gtest.h>

#include "anonmech/fixtures.hpp"
#include "anonmech/mechanism.hpp"
#include "printers.hpp"
#include "random_instances.hpp"

namespace anonmech {
namespace {

using Q = Rational;
using SF = StepFunction<Q>;

AllocationProfile<Q> ration_profile() {
  return {{SF::step(Q(1), true), SF::step(Q(2, 3), true, Q(1, 2))}};
}

TEST(Extract, RationingExampleMenu) {
  Evaluator<Q> ev(fixtures::ex_ration());
  auto mech = extract(ev, ration_profile());
  ASSERT_EQ(mech.periods.size(), 2u);
  const auto& p1 = mech.periods[0];
  EXPECT_EQ(p1.mode, MenuMode::Posted);
  EXPECT_EQ(*p1.q_high, Q(1));
  EXPECT_EQ(*p1.p_high, Q(5, 6));
  EXPECT_FALSE(p1.has_lottery());

  const auto& p2 = mech.periods[1];
  EXPECT_EQ(p2.mode, MenuMode::LotteryOnly);
  EXPECT_FALSE(p2.offers_high());
  EXPECT_EQ(*p2.q_high, unreachable_threshold<Q>());
  EXPECT_EQ(*p2.q_low, Q(2, 3));
  EXPECT_EQ(*p2.per_winner_price, Q(2, 3));
  EXPECT_EQ(*p2.service_prob, Q(1, 2));
  EXPECT_EQ(*p2.lottery_quantity, Q(1, 2));
  EXPECT_EQ(mech.lottery_tiers(), 1u);

  auto audit = lottery_quantity_audit(ev, ration_profile(), mech);
  EXPECT_FALSE(audit[0].has_value());
  ASSERT_TRUE(audit[1].has_value());
  EXPECT_EQ(*audit[1], Q(0));
}

TEST(Extract, TwoGenerationPostedPrices) {
  Evaluator<Q> ev(fixtures::ex_twogen());
  AllocationProfile<Q> a{{SF::step(Q(1), true), SF::step(Q(1, 2), true)}};
  auto mech = extract(ev, a);
  EXPECT_EQ(mech.periods[0].mode, MenuMode::Posted);
  EXPECT_EQ(mech.periods[1].mode, MenuMode::Posted);
  EXPECT_EQ(*mech.periods[0].p_high, Q(1, 2));
  EXPECT_EQ(*mech.periods[1].p_high, Q(1, 2));
  EXPECT_EQ(mech.lottery_tiers(), 0u);
}

TEST(Extract, ClosedPeriodsHaveNoPrices) {
  Evaluator<Q> ev(fixtures::ex_twogen());
  auto mech = extract(ev, AllocationProfile<Q>::zeros(2));
  for (const auto& p : mech.periods) {
    EXPECT_EQ(p.mode, MenuMode::Closed);
    EXPECT_FALSE(p.p_high.has_value());
    EXPECT_FALSE(p.per_winner_price.has_value());
  }
}

TEST(Extract, PostedPlusLottery) {
  Market m = fixtures::ex_ration();
  m.mass = {{Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(1, 2)}};
  Evaluator<Q> ev(m);
  AllocationProfile<Q> a{{SF({{Q(2, 3), true, Q(1, 4)}, {Q(1), true, Q(1)}}), SF::zero()}};
  auto mech = extract(ev, a);
  const auto& p = mech.periods[0];
  EXPECT_EQ(p.mode, MenuMode::PostedLottery);
  EXPECT_EQ(*p.service_prob, Q(1, 4));
  EXPECT_LT(*p.per_winner_price, *p.p_high);
  EXPECT_EQ(implied_allocation(mech, ev.instance().atoms)[0], (std::vector<Q>{Q(1, 4), Q(1)}));
}

TEST(Extract, RejectsProfilesItCannotImplement) {
  Evaluator<Q> ev(fixtures::ex_ration());
  AllocationProfile<Q> three{{SF({{Q(0), true, Q(1, 4)}, {Q(2, 3), true, Q(1, 2)}, {Q(1), true, Q(1)}}), SF::zero()}};
  try {
    extract(ev, three);
    FAIL() << "expected ExtractionError";
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.kind(), ExtractionErrorKind::TooManySteps);
    EXPECT_EQ(e.period(), 0u);
  }
  AllocationProfile<Q> low_top{{SF({{Q(2, 3), true, Q(1, 4)}, {Q(1), true, Q(1, 2)}}), SF::zero()}};
  try {
    extract(ev, low_top);
    FAIL() << "expected ExtractionError";
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.kind(), ExtractionErrorKind::TopLevelBelowOne);
  }
}

TEST(Extract, ImpliedAllocationReproducesSolverProfiles) {
  testing::RandomInstances gen(17);
  for (int n = 0; n < 20; ++n) {
    auto m = gen.market({.bounded = gen.coin(), .money_discounting = gen.coin()});
    AscentOptions<Q> o;
    o.starts = 2;
    auto report = coordinate_ascent<Q>(m, o);
    Evaluator<Q> ev(m);
    auto mech = extract(ev, report.profile);
    auto implied = implied_allocation(mech, ev.instance().atoms);
    for (std::size_t t = 0; t < m.periods; ++t) {
      for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        EXPECT_EQ(implied[t][i], report.profile.r[t](m.atoms[i])) << testing::market_hash(m);
      }
      const auto& p = mech.periods[t];
      if (p.p_high) {
        EXPECT_GE(*p.p_high, 0);
      }
      if (p.per_winner_price) {
        EXPECT_GE(*p.per_winner_price, 0);
      }
    }
    for (const auto& r : lottery_quantity_audit(ev, report.profile, mech)) {
      if (r) {
        EXPECT_EQ(*r, Q(0));
      }
    }
  }
}

TEST(MechanismJson, RoundTripsBothModes) {
  Evaluator<Q> ev(fixtures::ex_ration());
  auto mech = extract(ev, ration_profile());
  auto text = mechanism_to_json(mech);
  EXPECT_EQ(parse_mechanism<Q>(text), mech);
  EXPECT_NE(text.find("\"highReachable\": false"), std::string::npos);
  auto approx = parse_mechanism<double>(text);
  EXPECT_NEAR(*approx.periods[0].p_high, 5.0 / 6.0, 1e-15);
  EXPECT_THROW(parse_mechanism<Q>("{\"T\": 1}"), ParseError);
  EXPECT_THROW(parse_mechanism<Q>("not json"), ParseError);
}

TEST(MechanismJson, PricePathCsv) {
  Evaluator<Q> ev(fixtures::ex_ration());
  auto csv = price_path_csv(extract(ev, ration_profile()));
  EXPECT_EQ(csv, "t,pHigh,perWinnerPrice,lotteryQuantity\n1,5/6,,\n2,,2/3,1/2\n");
}

TEST(MenuMode, NamesRoundTrip) {
  for (auto m : {MenuMode::Closed, MenuMode::Posted, MenuMode::LotteryOnly, MenuMode::PostedLottery}) {
    EXPECT_EQ(parse_menu_mode(to_string(m)), m);
  }
  EXPECT_ANY_THROW(parse_menu_mode("auction"));
}

}  // namespace
}  // namespace anonmech
