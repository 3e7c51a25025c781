#include "anonmech/evaluator.hpp"

#include <algorithm>
#include <sstream>

namespace anonmech {

template <class S>
StepFunction<S> step_cast(const StepFunction<Rational>& f) {
  if constexpr (std::is_same_v<S, Rational>) {
    return f;
  } else {
    std::vector<Jump<S>> jumps;
    for (const auto& jp : f.jumps()) jumps.push_back({scalar_cast<S>(jp.at), jp.closed, scalar_cast<S>(jp.level)});
    return StepFunction<S>(std::move(jumps));
  }
}

template <class S>
AllocationProfile<S> profile_cast(const AllocationProfile<Rational>& a) {
  AllocationProfile<S> out;
  for (const auto& f : a.r) out.r.push_back(step_cast<S>(f));
  return out;
}

template <class S>
Instance<S> Instance<S>::from(const Market& m) {
  validate_market(m);
  auto conv = [](const std::vector<Rational>& xs) {
    std::vector<S> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(scalar_cast<S>(x));
    return out;
  };
  Instance<S> inst;
  inst.periods = m.periods;
  inst.atoms = conv(m.atoms);
  for (const auto& row : m.mass) inst.mass.push_back(conv(row));
  if (!m.inventory.is_unbounded()) inst.inventory = scalar_cast<S>(m.inventory.cap());
  inst.delta = conv(m.discounts.delta);
  inst.lambda_seller = conv(m.discounts.lambda_seller);
  inst.lambda_buyer = conv(m.discounts.lambda_buyer);
  return inst;
}

template <class S>
S Instance<S>::total_mass() const {
  S total(0);
  for (const auto& row : mass) {
    for (const auto& x : row) total += x;
  }
  return total;
}

template <class S>
Evaluator<S>::Evaluator(const Market& m) : inst_(Instance<S>::from(m)) {}

template <class S>
Evaluator<S>::Evaluator(Instance<S> instance) : inst_(std::move(instance)) {}

template <class S>
struct Evaluator<S>::Core {
  std::vector<S> pts;
  std::vector<std::vector<S>> seg_slope;  // g_t on each open segment, t = 0..T
  std::vector<std::vector<S>> knot_u;     // U_t at each partition point, t = 0..T
  std::vector<std::vector<S>> r_atom;
  std::vector<std::vector<S>> u_atom;     // t = 0..T
  PresenceTable<S> fstar;
  PaymentTable<S> pay;
  S revenue{0};
  S inventory{0};
  S welfare{0};
};

template <class S>
typename Evaluator<S>::Core Evaluator<S>::core(const AllocationProfile<S>& a) const {
  const std::size_t T = inst_.periods;
  const std::size_t n = inst_.atoms.size();
  if (a.periods() != T) {
    throw std::invalid_argument("profile has " + std::to_string(a.periods()) + " periods, market has " +
                                std::to_string(T));
  }
  const S tol = internal_tol<S>();

  Core c;
  c.pts = segment_refinement<S>(std::span<const StepFunction<S>>(a.r), std::span<const S>(inst_.atoms));
  const std::size_t m = c.pts.size() - 1;

  std::vector<CellValues<S>> cells;
  cells.reserve(T);
  for (const auto& f : a.r) cells.push_back(sample_cells<S>(f, c.pts));

  std::vector<std::size_t> atom_pt(n);
  for (std::size_t i = 0; i < n; ++i) {
    atom_pt[i] = static_cast<std::size_t>(std::lower_bound(c.pts.begin(), c.pts.end(), inst_.atoms[i]) - c.pts.begin());
  }

  // Slopes of U_t on each segment: g_t = delta_t r_t + (1 - r_t) g_{t+1}, g_{T+1} = 0.
  c.seg_slope.assign(T + 1, std::vector<S>(m, S(0)));
  for (std::size_t t = T; t-- > 0;) {
    for (std::size_t k = 0; k < m; ++k) {
      const S& r = cells[t].on_segments[k];
      c.seg_slope[t][k] = inst_.delta[t] * r + (S(1) - r) * c.seg_slope[t + 1][k];
    }
  }
  c.knot_u.assign(T + 1, std::vector<S>(m + 1, S(0)));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < m; ++k) {
      c.knot_u[t][k + 1] = c.knot_u[t][k] + c.seg_slope[t][k] * (c.pts[k + 1] - c.pts[k]);
    }
  }

  c.r_atom.assign(T, std::vector<S>(n));
  c.u_atom.assign(T + 1, std::vector<S>(n, S(0)));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      c.r_atom[t][i] = cells[t].at_points[atom_pt[i]];
      c.u_atom[t][i] = c.knot_u[t][atom_pt[i]];
    }
  }

  // Presence by recursion, cross-checked against the closed-form product.
  c.fstar.assign(T, std::vector<S>(n));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      c.fstar[t][i] = inst_.mass[t][i];
      if (t > 0) c.fstar[t][i] += c.fstar[t - 1][i] * (S(1) - c.r_atom[t - 1][i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      S closed(0);
      for (std::size_t j = 0; j <= t; ++j) {
        S term = inst_.mass[j][i];
        for (std::size_t l = j; l < t; ++l) term *= S(1) - c.r_atom[l][i];
        closed += term;
      }
      if (!near_rel(closed, c.fstar[t][i], tol)) throw InternalError("presence recursion disagrees with closed form");
    }
  }

  c.pay.assign(T, std::vector<S>(n));
  S inventory_by_service(0);
  for (std::size_t t = 0; t < T; ++t) {
    S period_cash(0);
    S period_value(0);
    for (std::size_t i = 0; i < n; ++i) {
      const S& v = inst_.atoms[i];
      const S& r = c.r_atom[t][i];
      S base = inst_.delta[t] * v * r + (S(1) - r) * c.u_atom[t + 1][i] - c.u_atom[t][i];
      c.pay[t][i] = base / inst_.lambda_buyer[t];
      period_cash += c.pay[t][i] * c.fstar[t][i];
      period_value += c.fstar[t][i] * r * v;
      inventory_by_service += r * c.fstar[t][i];
    }
    c.revenue += inst_.lambda_seller[t] * period_cash;
    c.welfare += inst_.delta[t] * period_value;
  }

  S inventory_by_arrival(0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      S never(1);
      for (std::size_t j = t; j < T; ++j) never *= S(1) - c.r_atom[j][i];
      inventory_by_arrival += (S(1) - never) * inst_.mass[t][i];
    }
  }
  if (!near_rel(inventory_by_service, inventory_by_arrival, tol)) {
    throw InternalError("inventory by service disagrees with inventory by arrival cohort");
  }
  c.inventory = inventory_by_service;
  return c;
}

template <class S>
Evaluation<S> Evaluator<S>::evaluate(const AllocationProfile<S>& a) const {
  Core c = core(a);
  Evaluation<S> e;
  const std::size_t T = inst_.periods;
  for (std::size_t t = 0; t <= T; ++t) {
    e.utilities.emplace_back(c.pts, c.seg_slope[t], S(0));
  }
  e.fstar = std::move(c.fstar);
  e.allocation = std::move(c.r_atom);
  e.utility = std::move(c.u_atom);
  e.payments = std::move(c.pay);
  e.revenue = c.revenue;
  e.inventory_used = c.inventory;
  e.welfare = c.welfare;
  const S tol = internal_tol<S>();
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < e.payments[t].size(); ++i) {
      if (e.payments[t][i] < -tol) e.negative_payments.emplace_back(t, i);
    }
  }
  return e;
}

template <class S>
PresenceTable<S> Evaluator<S>::fstar(const AllocationProfile<S>& a) const {
  return core(a).fstar;
}

template <class S>
std::vector<PiecewiseLinear<S>> Evaluator<S>::utilities(const AllocationProfile<S>& a) const {
  return evaluate(a).utilities;
}

template <class S>
PaymentTable<S> Evaluator<S>::payments(const AllocationProfile<S>& a) const {
  return core(a).pay;
}

template <class S>
S Evaluator<S>::revenue(const AllocationProfile<S>& a) const {
  return core(a).revenue;
}

template <class S>
S Evaluator<S>::inventory_used(const AllocationProfile<S>& a) const {
  return core(a).inventory;
}

template <class S>
S Evaluator<S>::welfare(const AllocationProfile<S>& a) const {
  return core(a).welfare;
}

template <class S>
std::pair<S, S> Evaluator<S>::revenue_and_inventory(const AllocationProfile<S>& a) const {
  Core c = core(a);
  return {c.revenue, c.inventory};
}

template <class S>
bool Evaluator<S>::feasible(const AllocationProfile<S>& a, const S& tol) const {
  if (!inst_.inventory) return true;
  return inventory_used(a) <= *inst_.inventory + tol;
}

template <class S>
std::string evaluation_csv(const Instance<S>& inst, const Evaluation<S>& e) {
  using F = Scalar<S>;
  std::ostringstream out;
  out << "t,v,fstar,r,U,p,cashflow\n";
  for (std::size_t t = 0; t < inst.periods; ++t) {
    for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
      S cash = inst.lambda_seller[t] * e.payments[t][i] * e.fstar[t][i];
      out << (t + 1) << ',' << F::format(inst.atoms[i]) << ',' << F::format(e.fstar[t][i]) << ','
          << F::format(e.allocation[t][i]) << ',' << F::format(e.utility[t][i]) << ','
          << F::format(e.payments[t][i]) << ',' << F::format(cash) << '\n';
    }
  }
  return out.str();
}

#define ANONMECH_INSTANTIATE(S)                                                   \
  template StepFunction<S> step_cast<S>(const StepFunction<Rational>&);           \
  template AllocationProfile<S> profile_cast<S>(const AllocationProfile<Rational>&); \
  template struct Instance<S>;                                                    \
  template class Evaluator<S>;                                                    \
  template std::string evaluation_csv<S>(const Instance<S>&, const Evaluation<S>&);

ANONMECH_INSTANTIATE(Rational)
ANONMECH_INSTANTIATE(double)

#undef ANONMECH_INSTANTIATE

}  // namespace anonmech
