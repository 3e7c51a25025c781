#pragma once

#include <stdexcept>
#include <vector>

#include "anonmech/evaluator.hpp"

namespace anonmech {

class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundedInventoryUnsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Search space of the brute-force oracle: allocation levels and size caps.
/// Jumps sit at atoms (either inclusion flag) or at 0.
template <class S>
struct OracleGrid {
  std::vector<S> levels{S(0), S(1) / S(4), S(1) / S(2), S(3) / S(4), S(1)};
  std::size_t max_periods = 3;
  std::size_t max_atoms = 3;

  static OracleGrid with_levels(std::vector<S> levels);
  /// Throws std::invalid_argument unless levels are sorted, distinct, within [0,1] and contain 0 and 1.
  void validate() const;
};

template <class S>
struct OracleResult {
  S revenue{0};
  AllocationProfile<S> profile;
  std::size_t profiles_checked = 0;
};

/// Exhaustive maximum of revenue over feasible grid profiles. Profiles are
/// visited in lexicographic order and the first maximizer is kept.
template <class S>
OracleResult<S> brute_force_optimal(const Evaluator<S>& ev, const OracleGrid<S>& grid);

template <class S>
struct MonopolyPrice {
  S price{0};
  S revenue{0};
};

/// Best single posted price among the atom values (ties to the lowest price).
/// `values` sorted ascending, one mass per value.
template <class S>
MonopolyPrice<S> static_monopoly(const std::vector<S>& values, const std::vector<S>& masses);

/// Revenue of selling to each arrival cohort separately at its own monopoly
/// price on arrival. Requires unbounded inventory.
template <class S>
S non_anonymous_benchmark(const Instance<S>& inst);

}  // namespace anonmech
