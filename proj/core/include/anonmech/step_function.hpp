#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "anonmech/numeric.hpp"

namespace anonmech {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One jump of a monotone step function. A closed jump at `at` already
/// applies at v == at; an open jump only for v > at.
template <class S>
struct Jump {
  S at;
  bool closed = true;
  S level;

  friend bool operator==(const Jump& a, const Jump& b) {
    return a.at == b.at && a.closed == b.closed && a.level == b.level;
  }
};

/// Monotone non-decreasing piecewise-constant function [0,1] -> [0,1].
///
/// The value before the first jump is 0; a positive value at 0 is a closed
/// jump at 0. Canonical form, enforced by the constructor:
///  - jumps sorted by location, and at a shared location the closed jump
///    comes before the open one (at most one of each);
///  - levels strictly increasing within (0,1] (no zero-height jumps);
///  - no open jump at 1 (it could never apply).
template <class S>
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(std::vector<Jump<S>> jumps);

  static StepFunction zero() { return StepFunction(); }
  static StepFunction constant(const S& level);
  /// level * 1[at <= v] (closed) or level * 1[at < v] (open).
  static StepFunction step(const S& at, bool closed, const S& level = S(1));

  /// Builds a function from its values on the cells of a partition:
  /// point_values[k] at points[k], segment_values[k] on (points[k], points[k+1]).
  /// Throws DomainError if the cell values are not monotone or leave [0,1].
  static StepFunction from_cells(std::span<const S> points, std::span<const S> point_values,
                                 std::span<const S> segment_values);

  /// Value at v in [0,1].
  S operator()(const S& v) const;
  /// Value on (v, v + eps) for small eps.
  S right_limit(const S& v) const;

  const std::vector<Jump<S>>& jumps() const { return jumps_; }
  std::size_t steps() const { return jumps_.size(); }
  bool is_zero() const { return jumps_.empty(); }
  S top() const { return jumps_.empty() ? S(0) : jumps_.back().level; }
  /// c_0 = 0 followed by the level after each jump.
  std::vector<S> levels() const;

  friend bool operator==(const StepFunction& a, const StepFunction& b) { return a.jumps_ == b.jumps_; }

 private:
  std::vector<Jump<S>> jumps_;
};

/// Values of a step function on every cell of a partition (see from_cells).
template <class S>
struct CellValues {
  std::vector<S> at_points;
  std::vector<S> on_segments;
};

/// Samples f on the cells of the sorted partition `points` in one merge pass.
template <class S>
CellValues<S> sample_cells(const StepFunction<S>& f, std::span<const S> points);

/// Minimal sorted partition 0 = p_0 < ... < p_m = 1 containing every jump
/// location of every input plus `extra` points (e.g. market atoms).
template <class S>
std::vector<S> segment_refinement(std::span<const StepFunction<S>> fs, std::span<const S> extra = {});

/// Expression over step functions: constants, references to the i-th input,
/// 1 - e, sums and products. Its value is constant on every open segment of
/// the refinement of the referenced functions.
template <class S>
class StepExpr {
 public:
  static StepExpr constant(S c);
  static StepExpr ref(std::size_t index);
  static StepExpr one_minus(StepExpr e);
  static StepExpr sum(std::vector<StepExpr> terms);
  static StepExpr product(std::vector<StepExpr> factors);

  /// Pointwise value given the value of each referenced function.
  S evaluate(std::span<const S> function_values) const;
  /// Inputs the expression needs: the largest referenced index plus one.
  std::size_t max_ref() const;

 private:
  enum class Kind { Constant, Ref, OneMinus, Sum, Product };
  Kind kind_ = Kind::Constant;
  S constant_{};
  std::size_t index_ = 0;
  std::vector<StepExpr> children_;
};

/// Exact Lebesgue integral of `integrand` over [0, upper]. Jump inclusion
/// flags do not matter here (points have measure zero).
template <class S>
S lebesgue_integral(std::span<const StepFunction<S>> fs, const StepExpr<S>& integrand, const S& upper);

}  // namespace anonmech
