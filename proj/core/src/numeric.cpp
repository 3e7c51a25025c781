#include "anonmech/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace anonmech {

NumericMode parse_numeric_mode(std::string_view text) {
  if (text == "rational") return NumericMode::Rational;
  if (text == "float") return NumericMode::Float;
  throw std::invalid_argument("unknown numeric mode '" + std::string(text) + "' (expected rational|float)");
}

std::string to_string(NumericMode mode) {
  return mode == NumericMode::Rational ? "rational" : "float";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Rational pow10(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return Rational(p);
  Rational q(mpz_class(1), p);
  q.canonicalize();
  return q;
}

Rational parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw NumberFormatError("not an integer: '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return Rational(negative ? mpz_class(-z) : z);
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) {
      throw NumberFormatError("bad exponent in '" + std::string(s) + "'");
    }
    body = body.substr(0, e);
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw NumberFormatError("not a number: '" + std::string(s) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(body)) throw NumberFormatError("not a number: '" + std::string(s) + "'");
    digits = std::string(body);
  }
  if (exponent > 4000 || exponent < -4000) throw NumberFormatError("exponent out of range in '" + std::string(s) + "'");
  Rational q(mpz_class(digits, 10));
  q *= pow10(exponent);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw NumberFormatError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw NumberFormatError("bad denominator in '" + std::string(text) + "'");
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw NumberFormatError("zero denominator in '" + std::string(text) + "'");
    Rational q(num.get_num(), den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw NumberFormatError("non-finite number");
  return parse_rational(Scalar<double>::format(value));
}

double to_double(const Rational& q) {
  // mpq_get_d truncates; pick the nearer of the two neighbouring doubles.
  double d = q.get_d();
  if (!std::isfinite(d)) return d;
  const double up = std::nextafter(d, std::numeric_limits<double>::infinity());
  const double down = std::nextafter(d, -std::numeric_limits<double>::infinity());
  double best = d;
  Rational best_err = ::abs(q - Rational(d));
  for (double cand : {up, down}) {
    if (!std::isfinite(cand)) continue;
    Rational err = ::abs(q - Rational(cand));
    if (err < best_err) {
      best = cand;
      best_err = err;
    }
  }
  return best;
}

std::string Scalar<double>::format(double d) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf.data(), ptr);
}

}  // namespace anonmech
