#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anonmech/evaluator.hpp"

namespace anonmech {

/// Revenue and inventory as affine functionals of one period's allocation h,
/// all other periods held fixed:
///
///   J(h) = constant + sum_k obj_density[k] * integral of h over segment k
///                   + sum_k obj_atom[k] * h(points[k])
///
/// and likewise G(h) for inventory. Segment k is (points[k], points[k+1]).
template <class S>
struct CoordinateLP {
  std::size_t period = 0;
  std::vector<S> points;
  std::vector<bool> is_atom;
  S constant{0};
  std::vector<S> obj_density;
  std::vector<S> obj_atom;
  S inv_constant{0};
  std::vector<S> inv_density;
  std::vector<S> inv_atom;
  /// Inventory left for h: cap minus inventory used when h = 0. nullopt = unbounded.
  std::optional<S> budget;

  std::size_t segments() const { return obj_density.size(); }
  /// J(h) - constant, for h with jumps on `points` only.
  S value(const StepFunction<S>& h) const;
  /// G(h) - inv_constant.
  S inventory(const StepFunction<S>& h) const;
};

/// Coefficients by probing the evaluator with steps at every boundary.
/// Throws InternalError if a probe contradicts affinity.
template <class S>
CoordinateLP<S> build_coordinate_lp(const Evaluator<S>& ev, const AllocationProfile<S>& a, std::size_t t);

/// Exact maximizer of value(h) over monotone h: [0,1] -> [0,1] subject to
/// inventory(h) <= budget. The result has at most two jumps, and with two
/// jumps its top level is 1. Values within `tie_tol` are treated as equal;
/// ties prefer fewer steps, then less inventory, then lower jump locations.
template <class S>
StepFunction<S> solve_coordinate(const CoordinateLP<S>& lp, const S& tie_tol = internal_tol<S>());

/// Raises every allocation to 1 on the region where the buyer is served
/// with certainty before the discount schedule next changes. Utilities,
/// revenue, welfare and inventory are unchanged.
template <class S>
AllocationProfile<S> normalize_staircase(const Evaluator<S>& ev, const AllocationProfile<S>& a);

template <class S>
struct AscentOptions {
  std::size_t starts = 16;
  std::size_t max_sweeps = 100;
  S tol = Scalar<S>::default_tol();
  std::uint64_t seed = 1;
  bool normalize = true;
};

template <class S>
struct StartResult {
  std::string kind;  // "zero", "one" or "random"
  std::uint64_t seed = 0;
  S revenue{0};
  std::size_t sweeps = 0;
  bool converged = true;
};

template <class S>
struct SolveReport {
  AllocationProfile<S> profile;
  S revenue{0};
  S inventory_used{0};
  std::size_t sweeps = 0;  // total over all starts
  std::vector<StartResult<S>> starts;
  bool binding = false;
  /// False when some start hit max_sweeps (the best iterate is still returned).
  bool converged = true;
};

/// Random monotone profile with at most two jumps per period, jumps at 0 or
/// at atoms, levels on the 1/8 grid.
template <class S>
AllocationProfile<S> random_start(const Instance<S>& inst, std::uint64_t seed);

template <class S>
SolveReport<S> coordinate_ascent(const Market& m, const AscentOptions<S>& opts = {});

template <class S>
std::string solve_report_text(const SolveReport<S>& r, const AscentOptions<S>& opts);

}  // namespace anonmech
