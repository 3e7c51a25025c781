#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anonmech/evaluator.hpp"

namespace anonmech {

enum class MenuMode { Closed, Posted, LotteryOnly, PostedLottery };

std::string to_string(MenuMode mode);
MenuMode parse_menu_mode(std::string_view text);

/// One period's menu: a posted price for certain service and at most one
/// rationed lottery. Prices are in buyer money (already divided by lambdaB).
template <class S>
struct PeriodMenu {
  MenuMode mode = MenuMode::Closed;

  std::optional<S> q_high;
  bool high_inclusive = true;
  /// False for the placeholder tier of a lottery-only period, which sits
  /// above every value and is never offered to buyers.
  bool high_reachable = true;
  std::optional<S> p_high;

  std::optional<S> q_low;
  bool low_inclusive = true;
  std::optional<S> service_prob;
  std::optional<S> per_winner_price;
  std::optional<S> lottery_quantity;

  bool has_lottery() const { return mode == MenuMode::LotteryOnly || mode == MenuMode::PostedLottery; }
  bool offers_high() const { return (mode == MenuMode::Posted || mode == MenuMode::PostedLottery) && high_reachable; }

  friend bool operator==(const PeriodMenu&, const PeriodMenu&) = default;
};

template <class S>
struct PricedMechanism {
  std::vector<PeriodMenu<S>> periods;

  std::size_t lottery_tiers() const;
  friend bool operator==(const PricedMechanism&, const PricedMechanism&) = default;
};

enum class ExtractionErrorKind { TooManySteps, TopLevelBelowOne, NegativePrice };

class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(ExtractionErrorKind kind, std::size_t period, const std::string& message);
  ExtractionErrorKind kind() const { return kind_; }
  /// 0-based period index.
  std::size_t period() const { return period_; }

 private:
  ExtractionErrorKind kind_;
  std::size_t period_;
};

/// Placeholder threshold for the unreachable high tier of a lottery-only period.
template <class S>
S unreachable_threshold() {
  return S(2);
}

/// Implements a profile with at most two steps per period as a menu.
template <class S>
PricedMechanism<S> extract(const Evaluator<S>& ev, const AllocationProfile<S>& a);

/// lotteryQuantity - serviceProb * (present mass inside the menu's lottery
/// band), per period; nullopt where the period has no lottery.
template <class S>
std::vector<std::optional<S>> lottery_quantity_audit(const Evaluator<S>& ev, const AllocationProfile<S>& a,
                                                     const PricedMechanism<S>& mech);

/// Allocation at each atom implied by the menu thresholds.
template <class S>
std::vector<std::vector<S>> implied_allocation(const PricedMechanism<S>& mech, const std::vector<S>& atoms);

template <class S>
std::string mechanism_to_json(const PricedMechanism<S>& mech);
/// Throws ParseError on malformed documents.
template <class S>
PricedMechanism<S> parse_mechanism(std::string_view json_text);

/// CSV t,pHigh,perWinnerPrice,lotteryQuantity; absent values left empty.
template <class S>
std::string price_path_csv(const PricedMechanism<S>& mech);

}  // namespace anonmech
