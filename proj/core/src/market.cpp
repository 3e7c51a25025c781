#include "anonmech/market.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace anonmech {

using nlohmann::json;

DiscountSchedule DiscountSchedule::uniform(std::size_t periods) {
  DiscountSchedule d;
  d.delta.assign(periods, Rational(1));
  d.lambda_seller.assign(periods, Rational(1));
  d.lambda_buyer.assign(periods, Rational(1));
  return d;
}

bool DiscountSchedule::trivial_money_discounting() const {
  for (const auto& x : lambda_seller) {
    if (x != 1) return false;
  }
  for (const auto& x : lambda_buyer) {
    if (x != 1) return false;
  }
  return true;
}

Rational Market::total_mass() const {
  Rational total(0);
  for (const auto& row : mass) {
    for (const auto& x : row) total += x;
  }
  return total;
}

Rational Market::arrivals(std::size_t t) const {
  Rational total(0);
  for (const auto& x : mass.at(t)) total += x;
  return total;
}

std::string to_string(MarketErrorKind kind) {
  switch (kind) {
    case MarketErrorKind::EmptyHorizon: return "EmptyHorizon";
    case MarketErrorKind::ShapeMismatch: return "ShapeMismatch";
    case MarketErrorKind::AtomOutOfRange: return "AtomOutOfRange";
    case MarketErrorKind::UnsortedAtoms: return "UnsortedAtoms";
    case MarketErrorKind::NegativeMass: return "NegativeMass";
    case MarketErrorKind::NegativeInventory: return "NegativeInventory";
    case MarketErrorKind::DiscountOutOfRange: return "DiscountOutOfRange";
    case MarketErrorKind::NonMonotoneDiscount: return "NonMonotoneDiscount";
  }
  return "Unknown";
}

namespace {

std::string indexed(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

void check_schedule(const std::vector<Rational>& xs, const std::string& name, std::size_t periods,
                    std::vector<MarketViolation>& out) {
  if (xs.size() != periods) {
    out.push_back({MarketErrorKind::ShapeMismatch, name,
                   name + " has " + std::to_string(xs.size()) + " entries, expected " + std::to_string(periods)});
    return;
  }
  for (std::size_t t = 0; t < xs.size(); ++t) {
    if (xs[t] <= 0 || xs[t] > 1) {
      out.push_back({MarketErrorKind::DiscountOutOfRange, indexed(name, t),
                     name + " entries must lie in (0,1], got " + xs[t].get_str()});
    }
    if (t > 0 && xs[t] > xs[t - 1]) {
      out.push_back({MarketErrorKind::NonMonotoneDiscount, indexed(name, t),
                     name + " must be non-increasing: " + xs[t - 1].get_str() + " then " + xs[t].get_str()});
    }
  }
}

}  // namespace

std::vector<MarketViolation> market_violations(const Market& m) {
  std::vector<MarketViolation> out;
  if (m.periods == 0) {
    out.push_back({MarketErrorKind::EmptyHorizon, "T", "market needs at least one period"});
  }
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    if (m.atoms[i] < 0 || m.atoms[i] > 1) {
      out.push_back({MarketErrorKind::AtomOutOfRange, indexed("atoms", i),
                     "atom " + m.atoms[i].get_str() + " outside [0,1]"});
    }
    if (i > 0 && m.atoms[i] <= m.atoms[i - 1]) {
      out.push_back({MarketErrorKind::UnsortedAtoms, indexed("atoms", i), "atoms must be strictly increasing"});
    }
  }
  if (m.mass.size() != m.periods) {
    out.push_back({MarketErrorKind::ShapeMismatch, "mass",
                   "mass has " + std::to_string(m.mass.size()) + " rows, expected " + std::to_string(m.periods)});
  }
  for (std::size_t t = 0; t < m.mass.size(); ++t) {
    if (m.mass[t].size() != m.atoms.size()) {
      out.push_back({MarketErrorKind::ShapeMismatch, indexed("mass", t), "row length differs from atom count"});
      continue;
    }
    for (std::size_t i = 0; i < m.mass[t].size(); ++i) {
      if (m.mass[t][i] < 0) {
        out.push_back({MarketErrorKind::NegativeMass, indexed(indexed("mass", t), i),
                       "negative mass " + m.mass[t][i].get_str()});
      }
    }
  }
  if (!m.inventory.is_unbounded() && m.inventory.cap() < 0) {
    out.push_back({MarketErrorKind::NegativeInventory, "inventory", "inventory must be >= 0"});
  }
  check_schedule(m.discounts.delta, "delta", m.periods, out);
  check_schedule(m.discounts.lambda_seller, "lambdaS", m.periods, out);
  check_schedule(m.discounts.lambda_buyer, "lambdaB", m.periods, out);
  return out;
}

namespace {

std::string describe(const std::vector<MarketViolation>& vs) {
  std::string s = "invalid market:";
  for (const auto& v : vs) s += " [" + to_string(v.kind) + " at " + v.field + ": " + v.message + "]";
  return s;
}

}  // namespace

InvalidMarket::InvalidMarket(std::vector<MarketViolation> violations)
    : std::invalid_argument(describe(violations)), violations_(std::move(violations)) {}

const Market& validate_market(const Market& m) {
  auto vs = market_violations(m);
  if (!vs.empty()) throw InvalidMarket(std::move(vs));
  return m;
}

ParseError::ParseError(const std::string& message, std::size_t line, std::string field)
    : std::runtime_error(message), line_(line), field_(std::move(field)) {}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what, 0, field);
}

Rational number_at(const json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) {
      return j.is_number_unsigned() ? Rational(mpz_class(std::to_string(j.get<std::uint64_t>())))
                                    : Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
    }
    if (j.is_number_float()) return rational_from_double(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const NumberFormatError& e) {
    field_error(field, e.what());
  }
  field_error(field, "expected a number or a fraction string");
}

std::vector<Rational> numbers_at(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], indexed(field, i)));
  return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json number_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
  return json(q.get_str());
}

json numbers_json(const std::vector<Rational>& xs) {
  json arr = json::array();
  for (const auto& x : xs) arr.push_back(number_json(x));
  return arr;
}

}  // namespace

Market parse_market(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of(json_text, e.byte), "");
  }
  if (!doc.is_object()) throw ParseError("market document must be a JSON object", 1, "");

  for (const auto& key : {"T", "atoms", "mass", "inventory", "delta"}) {
    if (!doc.contains(key)) field_error(key, "missing required key");
  }

  Market m;
  const json& t = doc["T"];
  if (!t.is_number_integer() || t.get<std::int64_t>() < 1) field_error("T", "expected an integer >= 1");
  m.periods = static_cast<std::size_t>(t.get<std::int64_t>());

  m.atoms = numbers_at(doc["atoms"], "atoms");
  for (std::size_t i = 1; i < m.atoms.size(); ++i) {
    if (m.atoms[i] == m.atoms[i - 1]) field_error(indexed("atoms", i), "duplicate atom value " + m.atoms[i].get_str());
    if (m.atoms[i] < m.atoms[i - 1]) field_error(indexed("atoms", i), "atoms must be listed in increasing order");
  }

  const json& mass = doc["mass"];
  if (!mass.is_array()) field_error("mass", "expected an array of per-period arrays");
  if (mass.size() != m.periods) {
    field_error("mass", "expected " + std::to_string(m.periods) + " rows, got " + std::to_string(mass.size()));
  }
  for (std::size_t r = 0; r < mass.size(); ++r) {
    auto row = numbers_at(mass[r], indexed("mass", r));
    if (row.size() != m.atoms.size()) field_error(indexed("mass", r), "row length differs from atom count");
    m.mass.push_back(std::move(row));
  }

  const json& inv = doc["inventory"];
  if (inv.is_string() && (inv.get<std::string>() == "inf" || inv.get<std::string>() == "Infinity")) {
    m.inventory = Inventory::unbounded();
  } else {
    m.inventory = Inventory::of(number_at(inv, "inventory"));
  }

  m.discounts = DiscountSchedule::uniform(m.periods);
  m.discounts.delta = numbers_at(doc["delta"], "delta");
  if (doc.contains("lambdaS")) m.discounts.lambda_seller = numbers_at(doc["lambdaS"], "lambdaS");
  if (doc.contains("lambdaB")) m.discounts.lambda_buyer = numbers_at(doc["lambdaB"], "lambdaB");

  validate_market(m);
  return m;
}

Market load_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open market file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_market(buf.str());
}

std::string serialize_market(const Market& m) {
  json doc = json::object();
  doc["T"] = m.periods;
  doc["atoms"] = numbers_json(m.atoms);
  json mass = json::array();
  for (const auto& row : m.mass) mass.push_back(numbers_json(row));
  doc["mass"] = mass;
  doc["inventory"] = m.inventory.is_unbounded() ? json("inf") : number_json(m.inventory.cap());
  doc["delta"] = numbers_json(m.discounts.delta);
  doc["lambdaS"] = numbers_json(m.discounts.lambda_seller);
  doc["lambdaB"] = numbers_json(m.discounts.lambda_buyer);
  return doc.dump(2) + "\n";
}

}  // namespace anonmech
