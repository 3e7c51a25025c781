#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anonmech/numeric.hpp"

namespace anonmech {

/// Seller supply: either a finite nonnegative cap or explicitly unbounded.
class Inventory {
 public:
  static Inventory unbounded() { return Inventory(); }
  static Inventory of(Rational cap) { return Inventory(std::move(cap)); }

  bool is_unbounded() const { return !cap_.has_value(); }
  /// Precondition: !is_unbounded().
  const Rational& cap() const { return cap_.value(); }

  friend bool operator==(const Inventory& a, const Inventory& b) { return a.cap_ == b.cap_; }

 private:
  Inventory() = default;
  explicit Inventory(Rational cap) : cap_(std::move(cap)) {}
  std::optional<Rational> cap_;
};

/// Per-period discount factors. `delta` discounts the buyer's value for the
/// good; `lambda_seller` and `lambda_buyer` discount money received/paid.
struct DiscountSchedule {
  std::vector<Rational> delta;
  std::vector<Rational> lambda_seller;
  std::vector<Rational> lambda_buyer;

  static DiscountSchedule uniform(std::size_t periods);
  bool trivial_money_discounting() const;

  friend bool operator==(const DiscountSchedule&, const DiscountSchedule&) = default;
};

/// A multi-period market with finitely many buyer value atoms.
///
/// Periods are stored 0-based: `mass[t][i]` is the mass of buyers with value
/// `atoms[i]` arriving in period t + 1.
struct Market {
  std::size_t periods = 0;
  std::vector<Rational> atoms;
  std::vector<std::vector<Rational>> mass;
  Inventory inventory = Inventory::unbounded();
  DiscountSchedule discounts;

  std::size_t atom_count() const { return atoms.size(); }
  Rational total_mass() const;
  Rational arrivals(std::size_t t) const;

  friend bool operator==(const Market&, const Market&) = default;
};

enum class MarketErrorKind {
  EmptyHorizon,
  ShapeMismatch,
  AtomOutOfRange,
  UnsortedAtoms,
  NegativeMass,
  NegativeInventory,
  DiscountOutOfRange,
  NonMonotoneDiscount,
};

std::string to_string(MarketErrorKind kind);

struct MarketViolation {
  MarketErrorKind kind;
  std::string field;
  std::string message;
};

/// Every invariant violation of `m`; empty iff the market is valid.
std::vector<MarketViolation> market_violations(const Market& m);

class InvalidMarket : public std::invalid_argument {
 public:
  explicit InvalidMarket(std::vector<MarketViolation> violations);
  const std::vector<MarketViolation>& violations() const { return violations_; }

 private:
  std::vector<MarketViolation> violations_;
};

/// Returns `m` unchanged if valid, throws InvalidMarket otherwise.
const Market& validate_market(const Market& m);

/// Malformed market document. `line` is 0 when the error is not tied to a
/// position in the text (a semantic field error).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::string field);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Parses and validates a market-spec JSON document.
Market parse_market(std::string_view json_text);
Market load_market(const std::filesystem::path& path);

/// Canonical JSON text; parse_market(serialize_market(m)) == m.
std::string serialize_market(const Market& m);

}  // namespace anonmech
