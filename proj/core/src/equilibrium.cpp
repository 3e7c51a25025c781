#include "anonmech/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace anonmech {

std::string to_string(Action a) {
  switch (a) {
    case Action::BuyHigh: return "buyHigh";
    case Action::EnterLottery: return "enterLottery";
    case Action::Wait: return "wait";
  }
  return "wait";
}

template <class S>
EquilibriumReport<S> best_response(const Instance<S>& inst, const PricedMechanism<S>& mech, const S& tol) {
  const std::size_t T = inst.periods;
  const std::size_t n = inst.atoms.size();
  if (mech.periods.size() != T) throw std::invalid_argument("mechanism period count differs from market horizon");

  EquilibriumReport<S> rep;
  rep.plan.assign(T, std::vector<Action>(n, Action::Wait));
  rep.utility.assign(T, std::vector<S>(n, S(0)));
  rep.ic_slack.assign(T, std::vector<S>(n, S(0)));
  rep.allocation.assign(T, std::vector<S>(n, S(0)));

  for (std::size_t i = 0; i < n; ++i) {
    const S& v = inst.atoms[i];
    S later(0);  // utility of being present at t + 1
    for (std::size_t t = T; t-- > 0;) {
      const auto& menu = mech.periods[t];
      const S& delta = inst.delta[t];
      const S& lambda = inst.lambda_buyer[t];

      // Priority order doubles as the tie-break order.
      std::array<std::optional<S>, 3> value;
      std::array<bool, 3> excluded_on_tie{false, false, false};
      if (menu.offers_high()) {
        value[0] = delta * v - lambda * *menu.p_high;
        excluded_on_tie[0] = !menu.high_inclusive && v == *menu.q_high;
      }
      if (menu.has_lottery()) {
        const S& r = *menu.service_prob;
        value[1] = r * (delta * v - lambda * *menu.per_winner_price) + (S(1) - r) * later;
        excluded_on_tie[1] = !menu.low_inclusive && v == *menu.q_low;
      }
      value[2] = later;

      S best = *value[2];
      for (const auto& x : value) {
        if (x && *x > best) best = *x;
      }
      int choice = -1;
      for (int pass = 0; pass < 2 && choice < 0; ++pass) {
        for (int k = 0; k < 3; ++k) {
          if (!value[k] || *value[k] < best - tol) continue;
          if (pass == 0 && excluded_on_tie[k] && *value[k] <= best + tol) {
            // Tied at an exclusive threshold: leave this tier to the other options,
            // unless it is strictly better than every alternative.
            bool strictly_best = true;
            for (int o = 0; o < 3; ++o) {
              if (o != k && value[o] && *value[o] >= *value[k] - tol) strictly_best = false;
            }
            if (!strictly_best) continue;
          }
          choice = k;
          break;
        }
      }
      S alternative{};
      bool has_alternative = false;
      for (int k = 0; k < 3; ++k) {
        if (k == choice || !value[k]) continue;
        if (!has_alternative || *value[k] > alternative) alternative = *value[k];
        has_alternative = true;
      }
      const S chosen = *value[choice];
      rep.plan[t][i] = static_cast<Action>(choice);
      rep.utility[t][i] = chosen;
      rep.ic_slack[t][i] = has_alternative ? S(chosen - alternative) : S(0);
      rep.allocation[t][i] = choice == 0 ? S(1) : choice == 1 ? *menu.service_prob : S(0);
      later = chosen;
    }
  }

  // Forward pass over the population following the plan.
  rep.presence.assign(T, std::vector<S>(n, S(0)));
  rep.demand.assign(T, S(0));
  rep.service_residual.assign(T, std::nullopt);
  std::vector<S> carry(n, S(0));
  for (std::size_t t = 0; t < T; ++t) {
    const auto& menu = mech.periods[t];
    S cash(0);
    for (std::size_t i = 0; i < n; ++i) {
      const S present = inst.mass[t][i] + carry[i];
      rep.presence[t][i] = present;
      switch (rep.plan[t][i]) {
        case Action::BuyHigh:
          cash += *menu.p_high * present;
          rep.realized_sales += present;
          carry[i] = S(0);
          break;
        case Action::EnterLottery: {
          const S& r = *menu.service_prob;
          rep.demand[t] += present;
          cash += *menu.per_winner_price * r * present;
          rep.realized_sales += r * present;
          carry[i] = (S(1) - r) * present;
          break;
        }
        case Action::Wait:
          carry[i] = present;
          break;
      }
    }
    if (menu.has_lottery()) rep.service_residual[t] = *menu.lottery_quantity - *menu.service_prob * rep.demand[t];
    rep.realized_revenue += inst.lambda_seller[t] * cash;
  }
  return rep;
}

namespace {

template <class S>
std::string cell_name(const Instance<S>& inst, std::size_t t, std::size_t i) {
  return "t=" + std::to_string(t + 1) + " v=" + Scalar<S>::format(inst.atoms[i]);
}

template <class S>
std::optional<AllocationProfile<S>> profile_from_menu(const PricedMechanism<S>& mech) {
  AllocationProfile<S> a;
  try {
    for (const auto& m : mech.periods) {
      std::vector<Jump<S>> jumps;
      if (m.has_lottery() && *m.service_prob < 1) jumps.push_back({*m.q_low, m.low_inclusive, *m.service_prob});
      if (m.offers_high() || (m.has_lottery() && *m.service_prob == 1)) {
        const bool high = m.offers_high();
        jumps.push_back({high ? *m.q_high : *m.q_low, high ? m.high_inclusive : m.low_inclusive, S(1)});
      }
      a.r.emplace_back(std::move(jumps));
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return a;
}

}  // namespace

template <class S>
VerifyResult<S> verify(const Evaluator<S>& ev, const AllocationProfile<S>& a, const PricedMechanism<S>& mech,
                       const S& tol) {
  const auto& inst = ev.instance();
  VerifyResult<S> out;
  auto fail = [&](std::string check, std::string message) {
    out.pass = false;
    out.violations.push_back({std::move(check), std::move(message)});
  };
  if (mech.periods.size() != inst.periods || a.periods() != inst.periods) {
    fail("shape", "mechanism or profile period count differs from the market");
    return out;
  }
  out.report = best_response(inst, mech, tol);
  const auto& rep = out.report;
  const Evaluation<S> e = ev.evaluate(a);
  using F = Scalar<S>;

  for (std::size_t t = 0; t < inst.periods; ++t) {
    for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
      if (!near(rep.allocation[t][i], e.allocation[t][i], tol)) {
        fail("allocation", cell_name(inst, t, i) + ": plan " + to_string(rep.plan[t][i]) + " serves with probability " +
                               F::format(rep.allocation[t][i]) + ", profile prescribes " +
                               F::format(e.allocation[t][i]));
      }
      if (rep.ic_slack[t][i] < -tol) {
        fail("incentive", cell_name(inst, t, i) + ": slack " + F::format(rep.ic_slack[t][i]));
      }
      if (!near(rep.utility[t][i], e.utility[t][i], tol)) {
        fail("utility", cell_name(inst, t, i) + ": simulated " + F::format(rep.utility[t][i]) + ", closed form " +
                            F::format(e.utility[t][i]));
      }
    }
    if (rep.service_residual[t] && F::abs(*rep.service_residual[t]) > tol) {
      fail("service", "t=" + std::to_string(t + 1) + ": lottery quantity minus served demand is " +
                          F::format(*rep.service_residual[t]));
    }
  }
  if (!near(rep.realized_revenue, e.revenue, tol)) {
    fail("revenue", "realized " + F::format(rep.realized_revenue) + ", evaluator " + F::format(e.revenue));
  }
  if (inst.inventory && rep.realized_sales > *inst.inventory + tol) {
    fail("inventory", "sales " + F::format(rep.realized_sales) + " exceed inventory " + F::format(*inst.inventory));
  }
  return out;
}

template <class S>
VerifyResult<S> verify(const Evaluator<S>& ev, const PricedMechanism<S>& mech, const S& tol) {
  if (mech.periods.size() != ev.instance().periods) {
    VerifyResult<S> out;
    out.pass = false;
    out.violations.push_back({"shape", "mechanism period count differs from the market"});
    return out;
  }
  auto a = profile_from_menu(mech);
  if (!a) {
    VerifyResult<S> out;
    out.pass = false;
    out.violations.push_back({"profile", "menu thresholds do not describe a monotone allocation"});
    out.report = best_response(ev.instance(), mech, tol);
    return out;
  }
  return verify(ev, *a, mech, tol);
}

template <class S>
std::string verification_text(const Instance<S>& inst, const VerifyResult<S>& v) {
  using F = Scalar<S>;
  std::ostringstream out;
  out << "verification: " << (v.pass ? "PASS" : "FAIL") << '\n';
  out << "realized revenue: " << F::format(v.report.realized_revenue) << '\n';
  out << "realized sales: " << F::format(v.report.realized_sales) << '\n';
  for (std::size_t t = 0; t < v.report.plan.size(); ++t) {
    out << "period " << (t + 1) << ':';
    for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
      out << ' ' << F::format(inst.atoms[i]) << "->" << to_string(v.report.plan[t][i]);
    }
    if (v.report.service_residual[t]) out << " (lottery demand " << F::format(v.report.demand[t]) << ')';
    out << '\n';
  }
  for (const auto& x : v.violations) out << "violation [" << x.check << "] " << x.message << '\n';
  return out.str();
}

template <class S>
std::string verification_csv(const Instance<S>& inst, const EquilibriumReport<S>& r) {
  using F = Scalar<S>;
  std::ostringstream out;
  out << "t,v,action,utility,icSlack\n";
  for (std::size_t t = 0; t < r.plan.size(); ++t) {
    for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
      out << (t + 1) << ',' << F::format(inst.atoms[i]) << ',' << to_string(r.plan[t][i]) << ','
          << F::format(r.utility[t][i]) << ',' << F::format(r.ic_slack[t][i]) << '\n';
    }
  }
  return out.str();
}

#define ANONMECH_INSTANTIATE(S)                                                                              \
  template EquilibriumReport<S> best_response<S>(const Instance<S>&, const PricedMechanism<S>&, const S&);   \
  template VerifyResult<S> verify<S>(const Evaluator<S>&, const AllocationProfile<S>&,                      \
                                     const PricedMechanism<S>&, const S&);                                   \
  template VerifyResult<S> verify<S>(const Evaluator<S>&, const PricedMechanism<S>&, const S&);              \
  template std::string verification_text<S>(const Instance<S>&, const VerifyResult<S>&);                     \
  template std::string verification_csv<S>(const Instance<S>&, const EquilibriumReport<S>&);

ANONMECH_INSTANTIATE(Rational)
ANONMECH_INSTANTIATE(double)

#undef ANONMECH_INSTANTIATE

}  // namespace anonmech
