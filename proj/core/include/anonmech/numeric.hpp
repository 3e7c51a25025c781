#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace anonmech {

/// Exact rational number. All market data is stored in this type; the
/// solver runs either on it directly or on `double`.
using Rational = mpq_class;

enum class NumericMode { Rational, Float };

NumericMode parse_numeric_mode(std::string_view text);
std::string to_string(NumericMode mode);

/// A broken internal invariant (a bug, not bad input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when text does not describe a number.
class NumberFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "3", "-2/3", "0.25", "1.5e-3". Decimal literals are converted
/// exactly (0.1 becomes 1/10).
Rational parse_rational(std::string_view text);

/// Exact rational value of a double, using its shortest round-trip decimal
/// spelling, so JSON literals such as 0.1 come back as 1/10.
Rational rational_from_double(double value);

/// Correctly rounded (nearest) conversion.
double to_double(const Rational& q);

template <class S>
struct Scalar;

template <>
struct Scalar<Rational> {
  static constexpr bool exact = true;
  static constexpr NumericMode mode = NumericMode::Rational;
  static Rational from(const Rational& q) { return q; }
  static double to_double(const Rational& q) { return anonmech::to_double(q); }
  static Rational abs(const Rational& q) { return ::abs(q); }
  static std::string format(const Rational& q) { return q.get_str(); }
  static Rational from_double(double d) { return rational_from_double(d); }
  /// Default equality tolerance for solver decisions.
  static Rational default_tol() { return Rational(1, 1000000000); }
};

template <>
struct Scalar<double> {
  static constexpr bool exact = false;
  static constexpr NumericMode mode = NumericMode::Float;
  static double from(const Rational& q) { return anonmech::to_double(q); }
  static double to_double(double d) { return d; }
  static double abs(double d) { return d < 0 ? -d : d; }
  static std::string format(double d);
  static double from_double(double d) { return d; }
  static double default_tol() { return 1e-7; }
};

template <class S>
S scalar_cast(const Rational& q) {
  return Scalar<S>::from(q);
}

template <class S>
bool near(const S& a, const S& b, const S& tol) {
  return Scalar<S>::abs(S(a - b)) <= tol;
}

/// |a - b| <= tol * max(1, |a|, |b|).
template <class S>
bool near_rel(const S& a, const S& b, const S& tol) {
  S scale(1);
  if (Scalar<S>::abs(a) > scale) scale = Scalar<S>::abs(a);
  if (Scalar<S>::abs(b) > scale) scale = Scalar<S>::abs(b);
  return Scalar<S>::abs(S(a - b)) <= S(tol * scale);
}

/// Tolerance for internal consistency assertions: exact for rationals.
template <class S>
S internal_tol() {
  if constexpr (Scalar<S>::exact) {
    return S(0);
  } else {
    return S(1e-9);
  }
}

}  // namespace anonmech
