#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anonmech/coordinate.hpp"
#include "anonmech/evaluator.hpp"
#include "anonmech/market.hpp"

namespace anonmech::testing {

/// Seeded generator of small markets and monotone profiles with
/// small-denominator rational data.
class RandomInstances {
 public:
  explicit RandomInstances(std::uint64_t seed) : rng_(seed) {}

  struct MarketShape {
    std::size_t max_periods = 3;
    std::size_t max_atoms = 3;
    bool bounded = false;
    bool tied_delta = false;  // force at least one delta_t == delta_{t+1}
    bool money_discounting = false;
  };

  Market market(const MarketShape& shape);
  /// Monotone step function with at most `max_jumps` jumps on the 1/12 grid
  /// or at atoms, levels on the 1/8 grid.
  StepFunction<Rational> step(const std::vector<Rational>& atoms, std::size_t max_jumps = 3);
  AllocationProfile<Rational> profile(const Market& m, std::size_t max_jumps = 3);
  /// Coordinate LP with at most `max_segments` segments on the 1/12 grid.
  /// When bounded, inventory is carried by at most two unit "packets" (an
  /// atom weight of 1, or density 1/len on a segment) and the budget is a
  /// multiple of 1/4, so every basic LP solution lies on the 1/8 level grid.
  CoordinateLP<Rational> coordinate_lp(std::size_t max_segments, bool bounded);

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  bool coin() { return rng_() % 2 == 0; }
  Rational fraction(long den, long lo, long hi);  // uniform in {lo/den, ..., hi/den}

 private:
  std::vector<Rational> non_increasing(std::size_t n, const std::vector<Rational>& choices, bool force_tie);

  std::mt19937_64 rng_;
};

/// Stable short fingerprint of a market document, for logging.
std::string market_hash(const Market& m);

}  // namespace anonmech::testing
