#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anonmech/market.hpp"
#include "anonmech/numeric.hpp"
#include "anonmech/piecewise_linear.hpp"
#include "anonmech/step_function.hpp"

namespace anonmech {

/// One allocation rule per period (index 0 is period 1).
template <class S>
struct AllocationProfile {
  std::vector<StepFunction<S>> r;

  static AllocationProfile zeros(std::size_t periods) { return {std::vector<StepFunction<S>>(periods)}; }
  static AllocationProfile ones(std::size_t periods) {
    return {std::vector<StepFunction<S>>(periods, StepFunction<S>::constant(S(1)))};
  }
  std::size_t periods() const { return r.size(); }

  friend bool operator==(const AllocationProfile&, const AllocationProfile&) = default;
};

/// Exact conversion from rational levels and locations (identity for Rational).
template <class S>
AllocationProfile<S> profile_cast(const AllocationProfile<Rational>& a);
template <class S>
StepFunction<S> step_cast(const StepFunction<Rational>& f);

/// Market data converted to the working scalar type once.
template <class S>
struct Instance {
  std::size_t periods = 0;
  std::vector<S> atoms;
  std::vector<std::vector<S>> mass;
  std::optional<S> inventory;  // nullopt = unbounded
  std::vector<S> delta;
  std::vector<S> lambda_seller;
  std::vector<S> lambda_buyer;

  static Instance from(const Market& m);
  S total_mass() const;
};

/// fstar[t][i]: mass of value-atoms[i] buyers present in period t.
template <class S>
using PresenceTable = std::vector<std::vector<S>>;

/// p[t][i]: expected payment, in buyer money, of a truthful atoms[i] bidder in period t.
template <class S>
using PaymentTable = std::vector<std::vector<S>>;

/// Everything the evaluator derives from one profile.
template <class S>
struct Evaluation {
  PresenceTable<S> fstar;
  /// utilities[t] for t = 0..T; utilities[T] is identically zero.
  std::vector<PiecewiseLinear<S>> utilities;
  std::vector<std::vector<S>> allocation;  // r_t(v_i)
  std::vector<std::vector<S>> utility;     // U_t(v_i)
  PaymentTable<S> payments;
  S revenue{};
  S inventory_used{};
  S welfare{};
  /// (t, i) cells whose payment is below -tolerance.
  std::vector<std::pair<std::size_t, std::size_t>> negative_payments;
};

/// Closed-form evaluation of allocation profiles on a fixed market.
///
/// Every entry point checks that the profile has one rule per period.
/// Internal cross-checks (two routes for f* and for inventory) throw
/// InternalError on mismatch.
template <class S>
class Evaluator {
 public:
  explicit Evaluator(const Market& m);
  explicit Evaluator(Instance<S> instance);

  const Instance<S>& instance() const { return inst_; }

  Evaluation<S> evaluate(const AllocationProfile<S>& a) const;

  PresenceTable<S> fstar(const AllocationProfile<S>& a) const;
  std::vector<PiecewiseLinear<S>> utilities(const AllocationProfile<S>& a) const;
  PaymentTable<S> payments(const AllocationProfile<S>& a) const;
  S revenue(const AllocationProfile<S>& a) const;
  S inventory_used(const AllocationProfile<S>& a) const;
  S welfare(const AllocationProfile<S>& a) const;

  /// Revenue and inventory together; cheaper than evaluate().
  std::pair<S, S> revenue_and_inventory(const AllocationProfile<S>& a) const;

  bool feasible(const AllocationProfile<S>& a, const S& tol) const;

 private:
  struct Core;
  Core core(const AllocationProfile<S>& a) const;

  Instance<S> inst_;
};

template <class S>
PresenceTable<S> compute_fstar(const Market& m, const AllocationProfile<S>& a) {
  return Evaluator<S>(m).fstar(a);
}
template <class S>
std::vector<PiecewiseLinear<S>> compute_utilities(const Market& m, const AllocationProfile<S>& a) {
  return Evaluator<S>(m).utilities(a);
}
template <class S>
PaymentTable<S> compute_payments(const Market& m, const AllocationProfile<S>& a) {
  return Evaluator<S>(m).payments(a);
}
template <class S>
S revenue(const Market& m, const AllocationProfile<S>& a) {
  return Evaluator<S>(m).revenue(a);
}
template <class S>
S inventory_used(const Market& m, const AllocationProfile<S>& a) {
  return Evaluator<S>(m).inventory_used(a);
}
template <class S>
S welfare(const Market& m, const AllocationProfile<S>& a) {
  return Evaluator<S>(m).welfare(a);
}

/// Per atom-period CSV: t,v,fstar,r,U,p,cashflow (cashflow = lambdaS * p * fstar).
template <class S>
std::string evaluation_csv(const Instance<S>& inst, const Evaluation<S>& e);

}  // namespace anonmech
