#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace anonmech::testing {

namespace {

using Q = Rational;

std::vector<Q> refinement(const std::vector<StepFunction<Q>>& fs, const std::vector<Q>& extra) {
  return segment_refinement<Q>(std::span<const StepFunction<Q>>(fs), std::span<const Q>(extra));
}

}  // namespace

StepFunction<Q> mixture(const StepFunction<Q>& f0, const StepFunction<Q>& f1, const Q& theta) {
  const std::vector<StepFunction<Q>> fs{f0, f1};
  const auto pts = refinement(fs, {});
  const auto c0 = sample_cells<Q>(f0, pts);
  const auto c1 = sample_cells<Q>(f1, pts);
  std::vector<Q> at, on;
  for (std::size_t k = 0; k < pts.size(); ++k) at.push_back(theta * c1.at_points[k] + (1 - theta) * c0.at_points[k]);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    on.push_back(theta * c1.on_segments[k] + (1 - theta) * c0.on_segments[k]);
  }
  return StepFunction<Q>::from_cells(pts, at, on);
}

std::vector<Q> probe_points(const std::vector<StepFunction<Q>>& fs, const std::vector<Q>& extra) {
  const auto pts = refinement(fs, extra);
  std::vector<Q> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.push_back(pts[k]);
    if (k + 1 < pts.size()) {
      const Q len = pts[k + 1] - pts[k];
      out.push_back(pts[k] + len / 3);
      out.push_back(pts[k] + len / 2);
      out.push_back(pts[k] + 2 * len / 3);
    }
  }
  return out;
}

std::vector<std::vector<Q>> utility_by_integral(const Instance<Q>& inst, const AllocationProfile<Q>& a) {
  const std::size_t T = inst.periods;
  std::vector<std::vector<Q>> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<StepExpr<Q>> terms;
    for (std::size_t j = t; j < T; ++j) {
      std::vector<StepExpr<Q>> factors{StepExpr<Q>::constant(inst.delta[j]), StepExpr<Q>::ref(j)};
      for (std::size_t k = t; k < j; ++k) factors.push_back(StepExpr<Q>::one_minus(StepExpr<Q>::ref(k)));
      terms.push_back(StepExpr<Q>::product(std::move(factors)));
    }
    const auto integrand = StepExpr<Q>::sum(std::move(terms));
    for (const auto& v : inst.atoms) {
      out[t].push_back(lebesgue_integral<Q>(std::span<const StepFunction<Q>>(a.r), integrand, v));
    }
  }
  return out;
}

std::vector<std::vector<Q>> utility_by_recursion(const Instance<Q>& inst, const AllocationProfile<Q>& a,
                                                 const std::vector<PiecewiseLinear<Q>>& utilities) {
  const std::size_t T = inst.periods;
  std::vector<Q> extra = inst.atoms;
  for (const auto& u : utilities) extra.insert(extra.end(), u.breakpoints().begin(), u.breakpoints().end());
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  const auto bids = probe_points(a.r, extra);

  std::vector<std::vector<Q>> out(T, std::vector<Q>(inst.atoms.size()));
  for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
    const Q& v = inst.atoms[i];
    Q next = 0;  // W_{t+1}(v)
    for (std::size_t t = T; t-- > 0;) {
      std::optional<Q> best;
      for (const auto& b : bids) {
        const Q r = a.r[t](b);
        const Q charge = inst.delta[t] * b * r + (1 - r) * utilities[t + 1](b) - utilities[t](b);
        const Q payoff = inst.delta[t] * v * r - charge + (1 - r) * next;
        if (!best || payoff > *best) best = payoff;
      }
      out[t][i] = *best;
      next = *best;
    }
  }
  return out;
}

Q revenue_by_simulation(const Instance<Q>& inst, const AllocationProfile<Q>& a,
                        const std::vector<std::vector<Q>>& payments) {
  std::vector<Q> present(inst.atoms.size(), Q(0));
  Q total = 0;
  for (std::size_t t = 0; t < inst.periods; ++t) {
    for (std::size_t i = 0; i < present.size(); ++i) {
      present[i] += inst.mass[t][i];
      total += inst.lambda_seller[t] * present[i] * payments[t][i];
      present[i] *= 1 - a.r[t](inst.atoms[i]);
    }
  }
  return total;
}

Q inventory_by_simulation(const Instance<Q>& inst, const AllocationProfile<Q>& a) {
  std::vector<Q> present(inst.atoms.size(), Q(0));
  Q sold = 0;
  for (std::size_t t = 0; t < inst.periods; ++t) {
    for (std::size_t i = 0; i < present.size(); ++i) {
      present[i] += inst.mass[t][i];
      const Q r = a.r[t](inst.atoms[i]);
      sold += present[i] * r;
      present[i] *= 1 - r;
    }
  }
  return sold;
}

std::vector<Indicator> lp_indicators(const CoordinateLP<Q>& lp) {
  std::vector<Indicator> out;
  auto add = [&](StepFunction<Q> h) {
    Q value = lp.value(h);
    Q inv = lp.inventory(h);
    out.push_back({std::move(h), std::move(value), std::move(inv)});
  };
  for (std::size_t k = 0; k < lp.points.size(); ++k) {
    add(StepFunction<Q>::step(lp.points[k], true));
    if (k + 1 < lp.points.size()) add(StepFunction<Q>::step(lp.points[k], false));
  }
  return out;
}

Q lp_optimum_by_bases(const CoordinateLP<Q>& lp) {
  const auto ind = lp_indicators(lp);
  // Standard form: columns are indicator weights then one slack per row.
  const std::size_t rows = lp.budget ? 2 : 1;
  const std::size_t cols = ind.size() + rows;
  auto coef = [&](std::size_t row, std::size_t col) -> Q {
    if (col >= ind.size()) return col - ind.size() == row ? Q(1) : Q(0);
    return row == 0 ? Q(1) : ind[col].inventory;
  };
  auto cost = [&](std::size_t col) -> Q { return col < ind.size() ? ind[col].value : Q(0); };
  const std::vector<Q> rhs = lp.budget ? std::vector<Q>{Q(1), *lp.budget} : std::vector<Q>{Q(1)};

  std::optional<Q> best;
  if (rows == 1) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (coef(0, j) == 0) continue;
      const Q x = rhs[0] / coef(0, j);
      if (x < 0) continue;
      const Q obj = cost(j) * x;
      if (!best || obj > *best) best = obj;
    }
  } else {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = j + 1; k < cols; ++k) {
        const Q det = coef(0, j) * coef(1, k) - coef(0, k) * coef(1, j);
        if (det == 0) continue;
        const Q xj = (rhs[0] * coef(1, k) - coef(0, k) * rhs[1]) / det;
        const Q xk = (coef(0, j) * rhs[1] - rhs[0] * coef(1, j)) / det;
        if (xj < 0 || xk < 0) continue;
        const Q obj = cost(j) * xj + cost(k) * xk;
        if (!best || obj > *best) best = obj;
      }
    }
  }
  if (!best) throw std::logic_error("LP has no basic feasible solution");
  return *best;
}

Q lp_optimum_by_grid(const CoordinateLP<Q>& lp, long levels) {
  std::vector<Q> obj, inv;
  for (std::size_t k = 0; k < lp.points.size(); ++k) {
    obj.push_back(lp.obj_atom[k]);
    inv.push_back(lp.inv_atom[k]);
    if (k + 1 < lp.points.size()) {
      const Q len = lp.points[k + 1] - lp.points[k];
      obj.push_back(lp.obj_density[k] * len);
      inv.push_back(lp.inv_density[k] * len);
    }
  }
  mpz_class den = 1;
  auto absorb = [&](const Q& q) { mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t()); };
  for (const auto& q : obj) absorb(q);
  for (const auto& q : inv) absorb(q);
  if (lp.budget) absorb(*lp.budget);
  auto to_int = [&](const Q& q) -> std::int64_t {
    Q scaled = q * den;
    if (scaled.get_den() != 1 || !scaled.get_num().fits_slong_p() || abs(scaled.get_num()) > (1L << 40)) {
      throw std::invalid_argument("grid oracle needs small denominators");
    }
    return scaled.get_num().get_si();
  };
  std::vector<std::int64_t> wj, wg;
  for (const auto& q : obj) wj.push_back(to_int(q));
  for (const auto& q : inv) wg.push_back(to_int(q));
  const std::optional<std::int64_t> cap =
      lp.budget ? std::optional<std::int64_t>(to_int(*lp.budget) * levels) : std::nullopt;

  std::int64_t best = 0;  // h = 0 is always feasible for a nonnegative budget
  std::function<void(std::size_t, long, std::int64_t, std::int64_t)> walk = [&](std::size_t cell, long floor_level,
                                                                                std::int64_t j, std::int64_t g) {
    if (cell == wj.size()) {
      if ((!cap || g <= *cap) && j > best) best = j;
      return;
    }
    for (long lvl = floor_level; lvl <= levels; ++lvl) walk(cell + 1, lvl, j + wj[cell] * lvl, g + wg[cell] * lvl);
  };
  walk(0, 0, 0, 0);
  Q result{mpz_class(best), mpz_class(den * levels)};
  result.canonicalize();
  return result;
}

}  // namespace anonmech::testing
