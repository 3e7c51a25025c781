#pragma once

#include <span>
#include <vector>

#include "anonmech/numeric.hpp"

namespace anonmech {

/// Continuous piecewise-linear function on [0,1], stored as breakpoints,
/// the value at 0 and one slope per piece. Evaluation beyond 1 extends the
/// last piece linearly.
template <class S>
class PiecewiseLinear {
 public:
  PiecewiseLinear();
  /// breakpoints 0 = b_0 < ... < b_m = 1 and m slopes.
  PiecewiseLinear(std::vector<S> breakpoints, std::vector<S> slopes, S value_at_zero = S(0));

  static PiecewiseLinear zero() { return PiecewiseLinear(); }

  S operator()(const S& v) const;
  /// Slope on the piece containing (v, v + eps); the last slope at v >= 1.
  S right_slope(const S& v) const;

  const std::vector<S>& breakpoints() const { return breakpoints_; }
  const std::vector<S>& slopes() const { return slopes_; }
  /// Values at every breakpoint.
  const std::vector<S>& knot_values() const { return knots_; }

  /// Pointwise difference, on the union of both breakpoint sets.
  PiecewiseLinear operator-(const PiecewiseLinear& other) const;

  /// Slopes non-decreasing within `tol`.
  bool is_convex(const S& tol) const;
  S max_slope() const;
  S min_slope() const;

 private:
  std::vector<S> breakpoints_;
  std::vector<S> slopes_;
  std::vector<S> knots_;
};

}  // namespace anonmech
