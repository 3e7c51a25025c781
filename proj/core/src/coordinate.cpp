#include "anonmech/coordinate.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <tuple>

namespace anonmech {

namespace {

template <class S>
S functional(const std::vector<S>& points, const std::vector<S>& density, const std::vector<S>& atom,
             const StepFunction<S>& h) {
  auto cells = sample_cells<S>(h, points);
  S total(0);
  for (std::size_t k = 0; k < density.size(); ++k) {
    total += density[k] * (points[k + 1] - points[k]) * cells.on_segments[k];
  }
  for (std::size_t k = 0; k < atom.size(); ++k) total += atom[k] * cells.at_points[k];
  return total;
}

}  // namespace

template <class S>
S CoordinateLP<S>::value(const StepFunction<S>& h) const {
  return functional(points, obj_density, obj_atom, h);
}

template <class S>
S CoordinateLP<S>::inventory(const StepFunction<S>& h) const {
  return functional(points, inv_density, inv_atom, h);
}

template <class S>
CoordinateLP<S> build_coordinate_lp(const Evaluator<S>& ev, const AllocationProfile<S>& a, std::size_t t) {
  const auto& inst = ev.instance();
  if (t >= a.periods()) throw std::out_of_range("coordinate period out of range");
  const S tol = internal_tol<S>();

  std::vector<StepFunction<S>> others;
  for (std::size_t j = 0; j < a.periods(); ++j) {
    if (j != t) others.push_back(a.r[j]);
  }

  CoordinateLP<S> lp;
  lp.period = t;
  lp.points = segment_refinement<S>(std::span<const StepFunction<S>>(others), std::span<const S>(inst.atoms));
  const std::size_t m = lp.points.size() - 1;
  lp.is_atom.assign(m + 1, false);
  for (const auto& v : inst.atoms) {
    lp.is_atom[static_cast<std::size_t>(std::lower_bound(lp.points.begin(), lp.points.end(), v) - lp.points.begin())] =
        true;
  }

  AllocationProfile<S> probe_profile = a;
  auto probe = [&](StepFunction<S> h) {
    probe_profile.r[t] = std::move(h);
    return ev.revenue_and_inventory(probe_profile);
  };

  std::tie(lp.constant, lp.inv_constant) = probe(StepFunction<S>::zero());
  std::vector<std::pair<S, S>> closed_step(m + 1), open_step(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    closed_step[k] = probe(StepFunction<S>::step(lp.points[k], true));
    open_step[k] = k < m ? probe(StepFunction<S>::step(lp.points[k], false))
                         : std::pair<S, S>{lp.constant, lp.inv_constant};
  }

  lp.obj_atom.resize(m + 1);
  lp.inv_atom.resize(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    lp.obj_atom[k] = closed_step[k].first - open_step[k].first;
    lp.inv_atom[k] = closed_step[k].second - open_step[k].second;
    if (!lp.is_atom[k]) {
      // Points without buyer mass cannot carry a point coefficient.
      if (!near_rel(lp.obj_atom[k], S(0), tol) || !near_rel(lp.inv_atom[k], S(0), tol)) {
        throw InternalError("non-atom boundary carries a point coefficient");
      }
      lp.obj_atom[k] = S(0);
      lp.inv_atom[k] = S(0);
    }
  }
  lp.obj_density.resize(m);
  lp.inv_density.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const S len = lp.points[k + 1] - lp.points[k];
    lp.obj_density[k] = (open_step[k].first - closed_step[k + 1].first) / len;
    lp.inv_density[k] = (open_step[k].second - closed_step[k + 1].second) / len;
  }

  // Affinity self-test: the constant 1/2 must land halfway between h = 0 and h = 1.
  const auto half = StepFunction<S>::constant(S(1) / S(2));
  auto [r_half, i_half] = probe(half);
  if (!near_rel(r_half, S(lp.constant + lp.value(half)), tol) ||
      !near_rel(i_half, S(lp.inv_constant + lp.inventory(half)), tol)) {
    throw InternalError("revenue or inventory is not affine in a single period's allocation");
  }

  if (inst.inventory) {
    S slack = *inst.inventory - lp.inv_constant;
    lp.budget = slack < 0 ? S(0) : slack;
  }
  return lp;
}

namespace {

// A single-step indicator on a boundary: 1[x >= points[k]] or 1[x > points[k]].
struct StepKey {
  std::size_t k;
  bool open;
  friend bool operator<(const StepKey& a, const StepKey& b) { return std::tie(a.k, a.open) < std::tie(b.k, b.open); }
  friend bool operator==(const StepKey& a, const StepKey& b) { return a.k == b.k && a.open == b.open; }
};

template <class S>
struct Candidate {
  S value{0};
  S inventory{0};
  std::vector<std::pair<StepKey, S>> parts;  // sorted by key

  std::vector<StepKey> keys() const {
    std::vector<StepKey> out;
    for (const auto& p : parts) out.push_back(p.first);
    return out;
  }
};

}  // namespace

template <class S>
StepFunction<S> solve_coordinate(const CoordinateLP<S>& lp, const S& tie_tol) {
  const std::size_t m = lp.segments();

  // Suffix sums give each indicator's value and inventory in O(1).
  std::vector<S> atom_obj(m + 2, S(0)), atom_inv(m + 2, S(0)), seg_obj(m + 1, S(0)), seg_inv(m + 1, S(0));
  for (std::size_t k = m + 1; k-- > 0;) {
    if (k <= m) {
      atom_obj[k] = atom_obj[k + 1] + lp.obj_atom[k];
      atom_inv[k] = atom_inv[k + 1] + lp.inv_atom[k];
    }
  }
  for (std::size_t k = m; k-- > 0;) {
    const S len = lp.points[k + 1] - lp.points[k];
    seg_obj[k] = seg_obj[k + 1] + lp.obj_density[k] * len;
    seg_inv[k] = seg_inv[k + 1] + lp.inv_density[k] * len;
  }

  struct Indicator {
    StepKey key;
    S value;
    S inventory;
  };
  std::vector<Indicator> hs;
  for (std::size_t k = 0; k <= m; ++k) {
    hs.push_back({{k, false}, S(atom_obj[k] + seg_obj[k]), S(atom_inv[k] + seg_inv[k])});
    if (k < m) hs.push_back({{k, true}, S(atom_obj[k + 1] + seg_obj[k]), S(atom_inv[k + 1] + seg_inv[k])});
  }

  std::vector<Candidate<S>> cands;
  cands.push_back(Candidate<S>{});  // h = 0
  const bool bounded = lp.budget.has_value();
  const S budget = bounded ? *lp.budget : S(0);
  for (const auto& h : hs) {
    if (!bounded || h.inventory <= budget) {
      cands.push_back({h.value, h.inventory, {{h.key, S(1)}}});
    } else if (h.value > 0 && budget > 0) {
      S alpha = budget / h.inventory;
      cands.push_back({S(alpha * h.value), budget, {{h.key, alpha}}});
    }
  }
  if (bounded) {
    // Both constraints tight: alpha_1 + alpha_2 = 1 and inventory = budget.
    for (const auto& lo : hs) {
      if (!(lo.inventory < budget)) continue;
      for (const auto& hi : hs) {
        if (!(hi.inventory > budget) || !(hi.value > lo.value)) continue;
        S a2 = (budget - lo.inventory) / (hi.inventory - lo.inventory);
        S a1 = S(1) - a2;
        if (!(a1 > 0) || !(a2 > 0)) continue;
        Candidate<S> c;
        c.value = a1 * lo.value + a2 * hi.value;
        c.inventory = budget;
        c.parts = {{lo.key, a1}, {hi.key, a2}};
        std::sort(c.parts.begin(), c.parts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        cands.push_back(std::move(c));
      }
    }
  }

  S best_value = cands.front().value;
  for (const auto& c : cands) best_value = std::max<S>(best_value, c.value);
  std::vector<const Candidate<S>*> pool;
  for (const auto& c : cands) {
    if (c.value >= best_value - tie_tol) pool.push_back(&c);
  }
  std::size_t fewest = pool.front()->parts.size();
  for (const auto* c : pool) fewest = std::min(fewest, c->parts.size());
  std::erase_if(pool, [&](const Candidate<S>* c) { return c->parts.size() != fewest; });
  S least_inv = pool.front()->inventory;
  for (const auto* c : pool) least_inv = std::min<S>(least_inv, c->inventory);
  std::erase_if(pool, [&](const Candidate<S>* c) { return c->inventory > least_inv + tie_tol; });
  const Candidate<S>* chosen = *std::min_element(pool.begin(), pool.end(), [](const auto* x, const auto* y) {
    return x->keys() < y->keys();
  });

  std::vector<Jump<S>> jumps;
  S level(0);
  for (const auto& [key, weight] : chosen->parts) {
    level += weight;
    jumps.push_back({lp.points[key.k], !key.open, level});
  }
  if (chosen->parts.size() == 2) jumps.back().level = S(1);  // a1 + a2 == 1, exactly
  return StepFunction<S>(std::move(jumps));
}

template <class S>
AllocationProfile<S> normalize_staircase(const Evaluator<S>& ev, const AllocationProfile<S>& a) {
  const auto& inst = ev.instance();
  const std::size_t T = inst.periods;
  if (a.periods() != T) throw std::invalid_argument("profile length differs from market horizon");
  const auto pts = segment_refinement<S>(std::span<const StepFunction<S>>(a.r), std::span<const S>(inst.atoms));
  const std::size_t cells_count = pts.size();
  const S one_minus = S(1) - internal_tol<S>();

  // Probability of being served before the schedule next changes, per cell.
  // Points first, then open segments, in one flat vector per period.
  std::vector<std::vector<S>> r(T), served(T);
  for (std::size_t t = 0; t < T; ++t) {
    auto c = sample_cells<S>(a.r[t], pts);
    r[t] = std::move(c.at_points);
    r[t].insert(r[t].end(), c.on_segments.begin(), c.on_segments.end());
  }
  for (std::size_t t = T; t-- > 0;) {
    const bool tied = t + 1 < T && inst.delta[t + 1] == inst.delta[t] &&
                      inst.lambda_seller[t + 1] == inst.lambda_seller[t] &&
                      inst.lambda_buyer[t + 1] == inst.lambda_buyer[t];
    served[t].resize(r[t].size());
    for (std::size_t c = 0; c < r[t].size(); ++c) {
      S later = tied ? served[t + 1][c] : S(0);
      served[t][c] = r[t][c] + (S(1) - r[t][c]) * later;
    }
  }

  AllocationProfile<S> out;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<S> at(r[t].begin(), r[t].begin() + static_cast<std::ptrdiff_t>(cells_count));
    std::vector<S> seg(r[t].begin() + static_cast<std::ptrdiff_t>(cells_count), r[t].end());
    for (std::size_t c = 0; c < at.size(); ++c) {
      if (served[t][c] >= one_minus) at[c] = S(1);
    }
    for (std::size_t c = 0; c < seg.size(); ++c) {
      if (served[t][cells_count + c] >= one_minus) seg[c] = S(1);
    }
    out.r.push_back(StepFunction<S>::from_cells(pts, at, seg));
  }
  return out;
}

template <class S>
AllocationProfile<S> random_start(const Instance<S>& inst, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<S, bool>> spots{{S(0), true}, {S(0), false}};
  for (const auto& v : inst.atoms) {
    if (v == 0) continue;
    spots.push_back({v, true});
    if (v < 1) spots.push_back({v, false});
  }
  AllocationProfile<S> a;
  for (std::size_t t = 0; t < inst.periods; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng() % 3);
    auto pool = spots;
    std::vector<std::pair<S, bool>> chosen;
    for (std::size_t j = 0; j < n && !pool.empty(); ++j) {
      std::size_t idx = static_cast<std::size_t>(rng() % pool.size());
      chosen.push_back(pool[idx]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::sort(chosen.begin(), chosen.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return x.second && !y.second;
    });
    std::vector<int> eighths{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> levels;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      std::size_t idx = static_cast<std::size_t>(rng() % eighths.size());
      levels.push_back(eighths[idx]);
      eighths.erase(eighths.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::sort(levels.begin(), levels.end());
    std::vector<Jump<S>> jumps;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      jumps.push_back({chosen[j].first, chosen[j].second, S(levels[j]) / S(8)});
    }
    a.r.emplace_back(std::move(jumps));
  }
  return a;
}

namespace {

template <class S>
struct StartOutcome {
  AllocationProfile<S> profile;
  S revenue{0};
  std::size_t sweeps = 0;
  bool converged = true;
};

template <class S>
void repair(const Evaluator<S>& ev, AllocationProfile<S>& a, const S& tol) {
  for (std::size_t t = a.periods(); t-- > 0 && !ev.feasible(a, tol);) a.r[t] = StepFunction<S>::zero();
}

template <class S>
StartOutcome<S> ascend(const Evaluator<S>& ev, AllocationProfile<S> a, const AscentOptions<S>& opts) {
  const auto& inst = ev.instance();
  const S check_tol = internal_tol<S>();
  repair(ev, a, opts.tol);
  StartOutcome<S> out;
  S rev = ev.revenue(a);
  std::size_t idle_sweeps = 0;
  out.converged = false;
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    ++out.sweeps;
    bool improved = false;
    bool changed = false;
    for (std::size_t t = 0; t < a.periods(); ++t) {
      auto lp = build_coordinate_lp(ev, a, t);
      auto h = solve_coordinate(lp);
      if (h == a.r[t]) continue;
      AllocationProfile<S> cand = a;
      cand.r[t] = std::move(h);
      Evaluation<S> e = ev.evaluate(cand);
      if (!e.negative_payments.empty()) continue;
      if (!near_rel(e.revenue, rev, check_tol) && e.revenue < rev) {
        throw InternalError("coordinate update decreased revenue");
      }
      if (inst.inventory && e.inventory_used > *inst.inventory + opts.tol) {
        throw InternalError("coordinate update violated the inventory cap");
      }
      if (e.revenue > rev + opts.tol) improved = true;
      changed = true;
      a = std::move(cand);
      rev = e.revenue;
    }
    if (!changed) {
      out.converged = true;
      break;
    }
    idle_sweeps = improved ? 0 : idle_sweeps + 1;
    if (idle_sweeps >= 3) {
      // Only tie-equivalent rules keep changing; stop the cycle.
      out.converged = true;
      break;
    }
  }
  out.profile = std::move(a);
  out.revenue = rev;
  return out;
}

}  // namespace

template <class S>
SolveReport<S> coordinate_ascent(const Market& m, const AscentOptions<S>& opts) {
  if (!(opts.tol > 0)) throw std::invalid_argument("tolerance must be positive");
  Evaluator<S> ev(m);
  const auto& inst = ev.instance();

  struct Start {
    std::string kind;
    std::uint64_t seed;
    AllocationProfile<S> profile;
  };
  std::vector<Start> starts;
  starts.push_back({"zero", 0, AllocationProfile<S>::zeros(inst.periods)});
  starts.push_back({"one", 0, AllocationProfile<S>::ones(inst.periods)});
  std::mt19937_64 master(opts.seed);
  for (std::size_t s = 0; s < opts.starts; ++s) {
    std::uint64_t seed = master();
    starts.push_back({"random", seed, random_start(inst, seed)});
  }

  SolveReport<S> report;
  std::optional<StartOutcome<S>> best;
  for (auto& st : starts) {
    auto outcome = ascend(ev, std::move(st.profile), opts);
    report.sweeps += outcome.sweeps;
    report.converged = report.converged && outcome.converged;
    report.starts.push_back({st.kind, st.seed, outcome.revenue, outcome.sweeps, outcome.converged});
    if (!best || outcome.revenue > best->revenue + opts.tol) best = std::move(outcome);
  }

  AllocationProfile<S> profile = std::move(best->profile);
  if (opts.normalize) {
    auto normalized = normalize_staircase(ev, profile);
    auto [rev_n, inv_n] = ev.revenue_and_inventory(normalized);
    bool fits = !inst.inventory || inv_n <= *inst.inventory + opts.tol;
    if (fits && rev_n >= best->revenue - opts.tol) profile = std::move(normalized);
  }

  Evaluation<S> e = ev.evaluate(profile);
  if (!e.negative_payments.empty()) throw InternalError("solver produced a profile with negative payments");
  report.profile = std::move(profile);
  report.revenue = e.revenue;
  report.inventory_used = e.inventory_used;
  report.binding = inst.inventory.has_value() && Scalar<S>::abs(S(e.inventory_used - *inst.inventory)) <= opts.tol;
  return report;
}

template <class S>
std::string solve_report_text(const SolveReport<S>& r, const AscentOptions<S>& opts) {
  using F = Scalar<S>;
  std::ostringstream out;
  out << "mode=" << to_string(F::mode) << '\n'
      << "seed=" << opts.seed << '\n'
      << "starts=" << opts.starts << '\n'
      << "max_sweeps=" << opts.max_sweeps << '\n'
      << "tol=" << F::format(opts.tol) << '\n'
      << "revenue=" << F::format(r.revenue) << '\n'
      << "inventory_used=" << F::format(r.inventory_used) << '\n'
      << "binding=" << (r.binding ? "true" : "false") << '\n'
      << "sweeps=" << r.sweeps << '\n'
      << "converged=" << (r.converged ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < r.starts.size(); ++i) {
    const auto& s = r.starts[i];
    out << "start[" << i << "]=" << s.kind << " seed=" << s.seed << " revenue=" << F::format(s.revenue)
        << " sweeps=" << s.sweeps << (s.converged ? "" : " nonconvergence") << '\n';
  }
  return out.str();
}

#define ANONMECH_INSTANTIATE(S)                                                                           \
  template struct CoordinateLP<S>;                                                                        \
  template CoordinateLP<S> build_coordinate_lp<S>(const Evaluator<S>&, const AllocationProfile<S>&, std::size_t); \
  template StepFunction<S> solve_coordinate<S>(const CoordinateLP<S>&, const S&);                         \
  template AllocationProfile<S> normalize_staircase<S>(const Evaluator<S>&, const AllocationProfile<S>&); \
  template AllocationProfile<S> random_start<S>(const Instance<S>&, std::uint64_t);                       \
  template SolveReport<S> coordinate_ascent<S>(const Market&, const AscentOptions<S>&);                   \
  template std::string solve_report_text<S>(const SolveReport<S>&, const AscentOptions<S>&);

ANONMECH_INSTANTIATE(Rational)
ANONMECH_INSTANTIATE(double)

#undef ANONMECH_INSTANTIATE

}  // namespace anonmech
