#include "anonmech/step_function.hpp"

#include <algorithm>
#include <string>

namespace anonmech {

namespace {

template <class S>
std::string fmt(const S& x) {
  return Scalar<S>::format(x);
}

}  // namespace

template <class S>
StepFunction<S>::StepFunction(std::vector<Jump<S>> jumps) : jumps_(std::move(jumps)) {
  S prev_level(0);
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    const auto& jp = jumps_[j];
    if (jp.at < 0 || jp.at > 1) throw DomainError("jump location " + fmt(jp.at) + " outside [0,1]");
    if (jp.level <= prev_level) throw DomainError("jump levels must strictly increase (zero-height or decreasing jump)");
    if (jp.level > 1) throw DomainError("level " + fmt(jp.level) + " exceeds 1");
    if (!jp.closed && jp.at == 1) throw DomainError("open jump at 1 never applies");
    if (j > 0) {
      const auto& prev = jumps_[j - 1];
      if (jp.at < prev.at) throw DomainError("jump locations must be sorted");
      if (jp.at == prev.at && !(prev.closed && !jp.closed)) {
        throw DomainError("a shared jump location needs one closed jump followed by one open jump");
      }
    }
    prev_level = jp.level;
  }
}

template <class S>
StepFunction<S> StepFunction<S>::constant(const S& level) {
  if (level == 0) return StepFunction();
  return StepFunction({Jump<S>{S(0), true, level}});
}

template <class S>
StepFunction<S> StepFunction<S>::step(const S& at, bool closed, const S& level) {
  if (level == 0 || (!closed && at == 1)) return StepFunction();
  return StepFunction({Jump<S>{at, closed, level}});
}

template <class S>
StepFunction<S> StepFunction<S>::from_cells(std::span<const S> points, std::span<const S> point_values,
                                            std::span<const S> segment_values) {
  if (points.empty() || point_values.size() != points.size() || segment_values.size() + 1 != points.size()) {
    throw DomainError("cell arrays do not match the partition");
  }
  std::vector<Jump<S>> jumps;
  S prev(0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const S& pv = point_values[k];
    if (pv < prev || pv > 1) throw DomainError("cell values not monotone within [0,1] at " + fmt(points[k]));
    if (pv > prev) {
      jumps.push_back({points[k], true, pv});
      prev = pv;
    }
    if (k + 1 < points.size()) {
      const S& sv = segment_values[k];
      if (sv < prev || sv > 1) throw DomainError("cell values not monotone within [0,1] after " + fmt(points[k]));
      if (sv > prev) {
        jumps.push_back({points[k], false, sv});
        prev = sv;
      }
    }
  }
  return StepFunction(std::move(jumps));
}

template <class S>
S StepFunction<S>::operator()(const S& v) const {
  if (v < 0 || v > 1) throw DomainError("evaluation point " + fmt(v) + " outside [0,1]");
  S level(0);
  for (const auto& jp : jumps_) {
    if (jp.at < v || (jp.at == v && jp.closed)) {
      level = jp.level;
    } else {
      break;
    }
  }
  return level;
}

template <class S>
S StepFunction<S>::right_limit(const S& v) const {
  S level(0);
  for (const auto& jp : jumps_) {
    if (jp.at <= v) {
      level = jp.level;
    } else {
      break;
    }
  }
  return level;
}

template <class S>
std::vector<S> StepFunction<S>::levels() const {
  std::vector<S> out{S(0)};
  for (const auto& jp : jumps_) out.push_back(jp.level);
  return out;
}

template <class S>
CellValues<S> sample_cells(const StepFunction<S>& f, std::span<const S> points) {
  CellValues<S> out;
  out.at_points.reserve(points.size());
  out.on_segments.reserve(points.empty() ? 0 : points.size() - 1);
  const auto& jumps = f.jumps();
  std::size_t j = 0;
  S level(0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const S& p = points[k];
    while (j < jumps.size() && (jumps[j].at < p || (jumps[j].at == p && jumps[j].closed))) level = jumps[j++].level;
    out.at_points.push_back(level);
    if (k + 1 < points.size()) {
      while (j < jumps.size() && jumps[j].at <= p) level = jumps[j++].level;
      out.on_segments.push_back(level);
    }
  }
  return out;
}

template <class S>
std::vector<S> segment_refinement(std::span<const StepFunction<S>> fs, std::span<const S> extra) {
  std::vector<S> pts{S(0), S(1)};
  for (const auto& f : fs) {
    for (const auto& jp : f.jumps()) pts.push_back(jp.at);
  }
  for (const auto& x : extra) {
    if (x < 0 || x > 1) throw DomainError("refinement point " + fmt(x) + " outside [0,1]");
    pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class S>
StepExpr<S> StepExpr<S>::constant(S c) {
  StepExpr e;
  e.kind_ = Kind::Constant;
  e.constant_ = std::move(c);
  return e;
}

template <class S>
StepExpr<S> StepExpr<S>::ref(std::size_t index) {
  StepExpr e;
  e.kind_ = Kind::Ref;
  e.index_ = index;
  return e;
}

template <class S>
StepExpr<S> StepExpr<S>::one_minus(StepExpr inner) {
  StepExpr e;
  e.kind_ = Kind::OneMinus;
  e.children_.push_back(std::move(inner));
  return e;
}

template <class S>
StepExpr<S> StepExpr<S>::sum(std::vector<StepExpr> terms) {
  StepExpr e;
  e.kind_ = Kind::Sum;
  e.children_ = std::move(terms);
  return e;
}

template <class S>
StepExpr<S> StepExpr<S>::product(std::vector<StepExpr> factors) {
  StepExpr e;
  e.kind_ = Kind::Product;
  e.children_ = std::move(factors);
  return e;
}

template <class S>
S StepExpr<S>::evaluate(std::span<const S> function_values) const {
  switch (kind_) {
    case Kind::Constant: return constant_;
    case Kind::Ref:
      if (index_ >= function_values.size()) throw DomainError("expression references a missing function");
      return function_values[index_];
    case Kind::OneMinus: return S(1) - children_.front().evaluate(function_values);
    case Kind::Sum: {
      S acc(0);
      for (const auto& c : children_) acc += c.evaluate(function_values);
      return acc;
    }
    case Kind::Product: {
      S acc(1);
      for (const auto& c : children_) acc *= c.evaluate(function_values);
      return acc;
    }
  }
  return S(0);
}

template <class S>
std::size_t StepExpr<S>::max_ref() const {
  std::size_t m = kind_ == Kind::Ref ? index_ + 1 : 0;
  for (const auto& c : children_) m = std::max(m, c.max_ref());
  return m;
}

template <class S>
S lebesgue_integral(std::span<const StepFunction<S>> fs, const StepExpr<S>& integrand, const S& upper) {
  if (upper < 0 || upper > 1) throw DomainError("integration bound " + fmt(upper) + " outside [0,1]");
  if (integrand.max_ref() > fs.size()) throw DomainError("expression references a missing function");
  const S bound[] = {upper};
  auto pts = segment_refinement<S>(fs, std::span<const S>(bound));
  std::vector<CellValues<S>> cells;
  cells.reserve(fs.size());
  for (const auto& f : fs) cells.push_back(sample_cells<S>(f, pts));

  S total(0);
  std::vector<S> vals(fs.size());
  for (std::size_t k = 0; k + 1 < pts.size() && pts[k + 1] <= upper; ++k) {
    for (std::size_t i = 0; i < fs.size(); ++i) vals[i] = cells[i].on_segments[k];
    total += integrand.evaluate(vals) * (pts[k + 1] - pts[k]);
  }
  return total;
}

#define ANONMECH_INSTANTIATE(S)                                                                   \
  template class StepFunction<S>;                                                                 \
  template class StepExpr<S>;                                                                     \
  template CellValues<S> sample_cells<S>(const StepFunction<S>&, std::span<const S>);             \
  template std::vector<S> segment_refinement<S>(std::span<const StepFunction<S>>, std::span<const S>); \
  template S lebesgue_integral<S>(std::span<const StepFunction<S>>, const StepExpr<S>&, const S&);

ANONMECH_INSTANTIATE(Rational)
ANONMECH_INSTANTIATE(double)

#undef ANONMECH_INSTANTIATE

}  // namespace anonmech
