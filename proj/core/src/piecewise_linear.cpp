#include "anonmech/piecewise_linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace anonmech {

template <class S>
PiecewiseLinear<S>::PiecewiseLinear() : PiecewiseLinear({S(0), S(1)}, {S(0)}) {}

template <class S>
PiecewiseLinear<S>::PiecewiseLinear(std::vector<S> breakpoints, std::vector<S> slopes, S value_at_zero)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (breakpoints_.size() < 2 || slopes_.size() + 1 != breakpoints_.size()) {
    throw std::invalid_argument("piecewise-linear function needs m+1 breakpoints and m slopes");
  }
  if (breakpoints_.front() != 0 || breakpoints_.back() != 1) {
    throw std::invalid_argument("breakpoints must span [0,1]");
  }
  knots_.reserve(breakpoints_.size());
  knots_.push_back(std::move(value_at_zero));
  for (std::size_t k = 0; k < slopes_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1])) throw std::invalid_argument("breakpoints must strictly increase");
    knots_.push_back(knots_.back() + slopes_[k] * (breakpoints_[k + 1] - breakpoints_[k]));
  }
}

template <class S>
S PiecewiseLinear<S>::operator()(const S& v) const {
  if (v < 0) throw std::domain_error("piecewise-linear evaluation below 0");
  // Piece k covers [b_k, b_{k+1}); v >= 1 falls on the last piece.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), v);
  std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
  k = k == 0 ? 0 : k - 1;
  if (k >= slopes_.size()) k = slopes_.size() - 1;
  return knots_[k] + slopes_[k] * (v - breakpoints_[k]);
}

template <class S>
S PiecewiseLinear<S>::right_slope(const S& v) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), v);
  std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
  k = k == 0 ? 0 : k - 1;
  if (k >= slopes_.size()) k = slopes_.size() - 1;
  return slopes_[k];
}

template <class S>
PiecewiseLinear<S> PiecewiseLinear<S>::operator-(const PiecewiseLinear& other) const {
  std::vector<S> pts;
  pts.reserve(breakpoints_.size() + other.breakpoints_.size());
  std::merge(breakpoints_.begin(), breakpoints_.end(), other.breakpoints_.begin(), other.breakpoints_.end(),
             std::back_inserter(pts));
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<S> slopes;
  slopes.reserve(pts.size() - 1);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) slopes.push_back(right_slope(pts[k]) - other.right_slope(pts[k]));
  return PiecewiseLinear(std::move(pts), std::move(slopes), knots_.front() - other.knots_.front());
}

template <class S>
bool PiecewiseLinear<S>::is_convex(const S& tol) const {
  for (std::size_t k = 1; k < slopes_.size(); ++k) {
    if (slopes_[k] < slopes_[k - 1] - tol) return false;
  }
  return true;
}

template <class S>
S PiecewiseLinear<S>::max_slope() const {
  return *std::max_element(slopes_.begin(), slopes_.end());
}

template <class S>
S PiecewiseLinear<S>::min_slope() const {
  return *std::min_element(slopes_.begin(), slopes_.end());
}

template class PiecewiseLinear<Rational>;
template class PiecewiseLinear<double>;

}  // namespace anonmech
