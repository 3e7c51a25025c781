#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anonmech/evaluator.hpp"
#include "anonmech/mechanism.hpp"

namespace anonmech {

enum class Action { BuyHigh, EnterLottery, Wait };

std::string to_string(Action a);

/// Backward-induction best responses of every atom type to a menu sequence,
/// plus the forward simulation of the population that follows them.
template <class S>
struct EquilibriumReport {
  std::vector<std::vector<Action>> plan;  // [t][i]
  std::vector<std::vector<S>> utility;    // continuation utility when present at t
  std::vector<std::vector<S>> ic_slack;   // chosen minus best alternative
  std::vector<std::vector<S>> presence;   // mass present at t
  std::vector<std::vector<S>> allocation; // service probability implied by the plan
  std::vector<S> demand;                  // mass entering each period's lottery
  std::vector<std::optional<S>> service_residual;
  S realized_revenue{0};
  S realized_sales{0};
};

/// Ties within `tol` go to buyHigh, then enterLottery, then wait, except that a
/// type sitting exactly on an exclusive threshold does not take that tier on a tie.
template <class S>
EquilibriumReport<S> best_response(const Instance<S>& inst, const PricedMechanism<S>& mech, const S& tol);

struct Violation {
  std::string check;
  std::string message;
};

template <class S>
struct VerifyResult {
  bool pass = true;
  std::vector<Violation> violations;
  EquilibriumReport<S> report;
};

/// Checks that the best responses reproduce `a`, lotteries clear, realized
/// revenue matches the evaluator, sales fit the inventory, nobody wants to
/// deviate, and simulated utilities match the closed-form ones. Never throws
/// on a failed check.
template <class S>
VerifyResult<S> verify(const Evaluator<S>& ev, const AllocationProfile<S>& a, const PricedMechanism<S>& mech,
                       const S& tol);

/// Verification without a target profile: the profile implied by the menu
/// thresholds is used instead.
template <class S>
VerifyResult<S> verify(const Evaluator<S>& ev, const PricedMechanism<S>& mech, const S& tol);

template <class S>
std::string verification_text(const Instance<S>& inst, const VerifyResult<S>& v);

/// CSV t,v,action,utility,icSlack.
template <class S>
std::string verification_csv(const Instance<S>& inst, const EquilibriumReport<S>& r);

}  // namespace anonmech
