#include "anonmech/oracle.hpp"

#include <string>

namespace anonmech {

template <class S>
OracleGrid<S> OracleGrid<S>::with_levels(std::vector<S> levels) {
  OracleGrid g;
  g.levels = std::move(levels);
  g.validate();
  return g;
}

template <class S>
void OracleGrid<S>::validate() const {
  if (levels.size() < 2 || levels.front() != 0 || levels.back() != 1) {
    throw std::invalid_argument("oracle levels must include 0 and 1");
  }
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (!(levels[k - 1] < levels[k])) throw std::invalid_argument("oracle levels must be strictly increasing");
  }
}

namespace {

// All non-decreasing index sequences of length `cells` over `levels` values,
// in lexicographic order.
std::vector<std::vector<std::size_t>> monotone_sequences(std::size_t cells, std::size_t levels) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> seq(cells, 0);
  while (true) {
    out.push_back(seq);
    std::size_t k = cells;
    while (k > 0 && seq[k - 1] + 1 == levels) --k;
    if (k == 0) break;
    ++seq[k - 1];
    for (std::size_t j = k; j < cells; ++j) seq[j] = seq[k - 1];
  }
  return out;
}

}  // namespace

template <class S>
OracleResult<S> brute_force_optimal(const Evaluator<S>& ev, const OracleGrid<S>& grid) {
  grid.validate();
  const auto& inst = ev.instance();
  if (inst.periods > grid.max_periods || inst.atoms.size() > grid.max_atoms) {
    throw InstanceTooLarge("oracle caps are T <= " + std::to_string(grid.max_periods) + " and atoms <= " +
                           std::to_string(grid.max_atoms) + "; instance has T = " + std::to_string(inst.periods) +
                           " and " + std::to_string(inst.atoms.size()) + " atoms");
  }

  // Cells that matter: (0, v_1), v_1, (v_1, v_2), ..., v_n. Values above the
  // top atom never enter revenue or inventory, so they copy the last cell.
  const auto& atoms = inst.atoms;
  std::vector<S> pts{S(0)};
  for (const auto& v : atoms) {
    if (v != 0) pts.push_back(v);
  }
  if (pts.back() != 1) pts.push_back(S(1));
  const bool lead_segment = atoms.empty() || atoms.front() != 0;
  const std::size_t cells = atoms.empty() ? 0 : 2 * atoms.size() - (lead_segment ? 0 : 1);

  std::vector<StepFunction<S>> shapes;
  for (const auto& seq : monotone_sequences(cells, grid.levels.size())) {
    std::vector<S> cell_value;
    for (auto idx : seq) cell_value.push_back(grid.levels[idx]);
    // Points and segments of pts interleave as at[0], seg[0], at[1], ...; the
    // point 0 copies the leading segment when it is not an atom.
    std::vector<S> flat;
    if (lead_segment && !cell_value.empty()) flat.push_back(cell_value.front());
    flat.insert(flat.end(), cell_value.begin(), cell_value.end());
    const S last = flat.empty() ? S(0) : flat.back();
    flat.resize(2 * pts.size() - 1, last);
    std::vector<S> at, seg;
    for (std::size_t k = 0; k < flat.size(); ++k) (k % 2 == 0 ? at : seg).push_back(flat[k]);
    shapes.push_back(StepFunction<S>::from_cells(pts, at, seg));
  }

  const std::size_t T = inst.periods;
  const std::size_t per = shapes.size();
  OracleResult<S> best;
  bool found = false;
  std::vector<std::size_t> odometer(T, 0);
  AllocationProfile<S> a = AllocationProfile<S>::zeros(T);
  const S slack = internal_tol<S>();
  while (true) {
    for (std::size_t t = 0; t < T; ++t) a.r[t] = shapes[odometer[t]];
    auto [rev, inv] = ev.revenue_and_inventory(a);
    ++best.profiles_checked;
    const bool feasible = !inst.inventory || inv <= *inst.inventory + slack;
    if (feasible && (!found || rev > best.revenue)) {
      best.revenue = rev;
      best.profile = a;
      found = true;
    }
    std::size_t t = T;
    while (t > 0 && odometer[t - 1] + 1 == per) odometer[--t] = 0;
    if (t == 0) break;
    ++odometer[t - 1];
  }
  return best;
}

template <class S>
MonopolyPrice<S> static_monopoly(const std::vector<S>& values, const std::vector<S>& masses) {
  if (values.empty() || values.size() != masses.size()) {
    throw std::invalid_argument("static monopoly needs one mass per value and at least one value");
  }
  MonopolyPrice<S> best{values.front(), S(0)};
  bool first = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    S above(0);
    for (std::size_t j = i; j < values.size(); ++j) above += masses[j];
    S rev = values[i] * above;
    if (first || rev > best.revenue) {
      best = {values[i], rev};
      first = false;
    }
  }
  return best;
}

template <class S>
S non_anonymous_benchmark(const Instance<S>& inst) {
  if (inst.inventory) {
    throw BoundedInventoryUnsupported("the per-cohort benchmark is defined only for unbounded inventory");
  }
  S total(0);
  for (std::size_t t = 0; t < inst.periods; ++t) {
    if (inst.atoms.empty()) break;
    // Price in buyer money so that delta_t * v = lambdaB_t * price at the threshold.
    std::vector<S> prices;
    for (const auto& v : inst.atoms) prices.push_back(S(inst.delta[t] * v / inst.lambda_buyer[t]));
    total += inst.lambda_seller[t] * static_monopoly(prices, inst.mass[t]).revenue;
  }
  return total;
}

#define ANONMECH_INSTANTIATE(S)                                                                 \
  template struct OracleGrid<S>;                                                                \
  template OracleResult<S> brute_force_optimal<S>(const Evaluator<S>&, const OracleGrid<S>&);   \
  template MonopolyPrice<S> static_monopoly<S>(const std::vector<S>&, const std::vector<S>&);   \
  template S non_anonymous_benchmark<S>(const Instance<S>&);

ANONMECH_INSTANTIATE(Rational)
ANONMECH_INSTANTIATE(double)

#undef ANONMECH_INSTANTIATE

}  // namespace anonmech
