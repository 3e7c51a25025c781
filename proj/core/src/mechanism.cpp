#include "anonmech/mechanism.hpp"

#include <sstream>

#include "json.hpp"

namespace anonmech {

using nlohmann::json;

std::string to_string(MenuMode mode) {
  switch (mode) {
    case MenuMode::Closed: return "closed";
    case MenuMode::Posted: return "posted";
    case MenuMode::LotteryOnly: return "lottery-only";
    case MenuMode::PostedLottery: return "posted+lottery";
  }
  return "closed";
}

MenuMode parse_menu_mode(std::string_view text) {
  if (text == "closed") return MenuMode::Closed;
  if (text == "posted") return MenuMode::Posted;
  if (text == "lottery-only") return MenuMode::LotteryOnly;
  if (text == "posted+lottery") return MenuMode::PostedLottery;
  throw std::invalid_argument("unknown menu mode '" + std::string(text) + "'");
}

template <class S>
std::size_t PricedMechanism<S>::lottery_tiers() const {
  std::size_t n = 0;
  for (const auto& p : periods) n += p.has_lottery() ? 1 : 0;
  return n;
}

ExtractionError::ExtractionError(ExtractionErrorKind kind, std::size_t period, const std::string& message)
    : std::runtime_error(message), kind_(kind), period_(period) {}

namespace {

template <class S>
bool in_band(const S& v, const S& q, bool inclusive) {
  return inclusive ? v >= q : v > q;
}

}  // namespace

template <class S>
PricedMechanism<S> extract(const Evaluator<S>& ev, const AllocationProfile<S>& a) {
  const auto& inst = ev.instance();
  const Evaluation<S> e = ev.evaluate(a);
  const S tol = internal_tol<S>();
  PricedMechanism<S> mech;

  for (std::size_t t = 0; t < inst.periods; ++t) {
    const auto& jumps = a.r[t].jumps();
    const auto& next_u = e.utilities[t + 1];
    const S& delta = inst.delta[t];
    const S& lambda = inst.lambda_buyer[t];
    const std::string label = "period " + std::to_string(t + 1);
    if (jumps.size() > 2) {
      throw ExtractionError(ExtractionErrorKind::TooManySteps, t,
                            label + " has " + std::to_string(jumps.size()) + " steps; a menu supports at most 2");
    }

    PeriodMenu<S> menu;
    // Buyer surplus from certain service at threshold q, net of waiting.
    auto margin = [&](const S& q) { return S(delta * q - next_u(q)); };

    auto set_lottery = [&](const Jump<S>& lo, const S& q_high) {
      const S& r = lo.level;
      const S p_low = r * margin(lo.at);
      const S p_high = delta * q_high - (r * delta * q_high - p_low + (S(1) - r) * next_u(q_high));
      menu.q_low = lo.at;
      menu.low_inclusive = lo.closed;
      menu.service_prob = r;
      menu.per_winner_price = p_low / r / lambda;
      menu.p_high = p_high / lambda;
      S demand(0);
      for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
        if (near(e.allocation[t][i], r, tol)) demand += e.fstar[t][i];
      }
      menu.lottery_quantity = r * demand;
    };

    if (jumps.empty()) {
      menu.mode = MenuMode::Closed;
    } else if (jumps.size() == 1 && jumps[0].level == 1) {
      menu.mode = MenuMode::Posted;
      menu.q_high = jumps[0].at;
      menu.high_inclusive = jumps[0].closed;
      menu.p_high = margin(jumps[0].at) / lambda;
    } else if (jumps.size() == 1) {
      menu.mode = MenuMode::LotteryOnly;
      menu.q_high = unreachable_threshold<S>();
      menu.high_reachable = false;
      set_lottery(jumps[0], *menu.q_high);
    } else {
      if (jumps[1].level != 1) {
        throw ExtractionError(ExtractionErrorKind::TopLevelBelowOne, t,
                              label + " has two steps but never allocates with certainty");
      }
      menu.mode = MenuMode::PostedLottery;
      menu.q_high = jumps[1].at;
      menu.high_inclusive = jumps[1].closed;
      set_lottery(jumps[0], jumps[1].at);
    }

    for (const auto* price : {&menu.p_high, &menu.per_winner_price}) {
      if (*price && **price < -tol) {
        throw ExtractionError(ExtractionErrorKind::NegativePrice, t,
                              label + " would need negative price " + Scalar<S>::format(**price));
      }
    }
    mech.periods.push_back(std::move(menu));
  }
  return mech;
}

template <class S>
std::vector<std::vector<S>> implied_allocation(const PricedMechanism<S>& mech, const std::vector<S>& atoms) {
  std::vector<std::vector<S>> out;
  for (const auto& menu : mech.periods) {
    std::vector<S> row(atoms.size(), S(0));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const S& v = atoms[i];
      if (menu.offers_high() && in_band(v, *menu.q_high, menu.high_inclusive)) {
        row[i] = S(1);
      } else if (menu.has_lottery() && in_band(v, *menu.q_low, menu.low_inclusive)) {
        row[i] = *menu.service_prob;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

template <class S>
std::vector<std::optional<S>> lottery_quantity_audit(const Evaluator<S>& ev, const AllocationProfile<S>& a,
                                                     const PricedMechanism<S>& mech) {
  const auto& inst = ev.instance();
  const auto fstar = ev.fstar(a);
  std::vector<std::optional<S>> out;
  for (std::size_t t = 0; t < mech.periods.size(); ++t) {
    const auto& menu = mech.periods[t];
    if (!menu.has_lottery()) {
      out.emplace_back();
      continue;
    }
    S demand(0);
    for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
      const S& v = inst.atoms[i];
      bool high = menu.offers_high() && in_band(v, *menu.q_high, menu.high_inclusive);
      if (!high && in_band(v, *menu.q_low, menu.low_inclusive)) demand += fstar[t][i];
    }
    out.emplace_back(S(*menu.lottery_quantity - *menu.service_prob * demand));
  }
  return out;
}

namespace {

template <class S>
json opt_number(const std::optional<S>& x) {
  return x ? json(Scalar<S>::format(*x)) : json(nullptr);
}

template <class S>
std::optional<S> read_opt(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  const json& j = obj[key];
  try {
    if (j.is_string()) return scalar_cast<S>(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return S(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_float()) return scalar_cast<S>(rational_from_double(j.get<double>()));
  } catch (const NumberFormatError& e) {
    throw ParseError(where + "." + key + ": " + e.what(), 0, key);
  }
  throw ParseError(where + "." + key + ": expected a number", 0, key);
}

bool read_flag(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ParseError(std::string(key) + ": expected true or false", 0, key);
  return obj[key].get<bool>();
}

}  // namespace

template <class S>
std::string mechanism_to_json(const PricedMechanism<S>& mech) {
  json doc = json::object();
  doc["T"] = mech.periods.size();
  json periods = json::array();
  for (std::size_t t = 0; t < mech.periods.size(); ++t) {
    const auto& m = mech.periods[t];
    json p = json::object();
    p["t"] = t + 1;
    p["mode"] = to_string(m.mode);
    p["qHigh"] = opt_number(m.q_high);
    p["highInclusive"] = m.high_inclusive;
    p["highReachable"] = m.high_reachable;
    p["pHigh"] = opt_number(m.p_high);
    p["qLow"] = opt_number(m.q_low);
    p["lowInclusive"] = m.low_inclusive;
    p["serviceProb"] = opt_number(m.service_prob);
    p["perWinnerPrice"] = opt_number(m.per_winner_price);
    p["lotteryQuantity"] = opt_number(m.lottery_quantity);
    periods.push_back(std::move(p));
  }
  doc["periods"] = std::move(periods);
  return doc.dump(2) + "\n";
}

template <class S>
PricedMechanism<S> parse_mechanism(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0, "");
  }
  if (!doc.is_object() || !doc.contains("periods") || !doc["periods"].is_array()) {
    throw ParseError("mechanism document needs a 'periods' array", 0, "periods");
  }
  PricedMechanism<S> mech;
  for (std::size_t t = 0; t < doc["periods"].size(); ++t) {
    const json& p = doc["periods"][t];
    const std::string where = "periods[" + std::to_string(t) + "]";
    if (!p.is_object() || !p.contains("mode") || !p["mode"].is_string()) {
      throw ParseError(where + ": missing mode", 0, "mode");
    }
    PeriodMenu<S> m;
    try {
      m.mode = parse_menu_mode(p["mode"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what(), 0, "mode");
    }
    m.q_high = read_opt<S>(p, "qHigh", where);
    m.high_inclusive = read_flag(p, "highInclusive", true);
    m.high_reachable = read_flag(p, "highReachable", true);
    m.p_high = read_opt<S>(p, "pHigh", where);
    m.q_low = read_opt<S>(p, "qLow", where);
    m.low_inclusive = read_flag(p, "lowInclusive", true);
    m.service_prob = read_opt<S>(p, "serviceProb", where);
    m.per_winner_price = read_opt<S>(p, "perWinnerPrice", where);
    m.lottery_quantity = read_opt<S>(p, "lotteryQuantity", where);
    const bool needs_high = m.mode == MenuMode::Posted || m.mode == MenuMode::PostedLottery;
    if (needs_high && (!m.q_high || !m.p_high)) throw ParseError(where + ": posted tier needs qHigh and pHigh", 0, "pHigh");
    if (m.has_lottery() && (!m.q_low || !m.service_prob || !m.per_winner_price || !m.lottery_quantity)) {
      throw ParseError(where + ": lottery tier needs qLow, serviceProb, perWinnerPrice, lotteryQuantity", 0,
                       "serviceProb");
    }
    if (m.has_lottery() && !(*m.service_prob > 0 && *m.service_prob <= 1)) {
      throw ParseError(where + ": serviceProb must lie in (0,1]", 0, "serviceProb");
    }
    mech.periods.push_back(std::move(m));
  }
  return mech;
}

template <class S>
std::string price_path_csv(const PricedMechanism<S>& mech) {
  std::ostringstream out;
  out << "t,pHigh,perWinnerPrice,lotteryQuantity\n";
  auto cell = [](const std::optional<S>& x) { return x ? Scalar<S>::format(*x) : std::string(); };
  for (std::size_t t = 0; t < mech.periods.size(); ++t) {
    const auto& m = mech.periods[t];
    out << (t + 1) << ',' << (m.offers_high() ? cell(m.p_high) : std::string()) << ','
        << cell(m.per_winner_price) << ',' << cell(m.lottery_quantity) << '\n';
  }
  return out.str();
}

#define ANONMECH_INSTANTIATE(S)                                                                              \
  template struct PricedMechanism<S>;                                                                        \
  template PricedMechanism<S> extract<S>(const Evaluator<S>&, const AllocationProfile<S>&);                  \
  template std::vector<std::optional<S>> lottery_quantity_audit<S>(const Evaluator<S>&,                     \
                                                                   const AllocationProfile<S>&,             \
                                                                   const PricedMechanism<S>&);              \
  template std::vector<std::vector<S>> implied_allocation<S>(const PricedMechanism<S>&, const std::vector<S>&); \
  template std::string mechanism_to_json<S>(const PricedMechanism<S>&);                                      \
  template PricedMechanism<S> parse_mechanism<S>(std::string_view);                                          \
  template std::string price_path_csv<S>(const PricedMechanism<S>&);

ANONMECH_INSTANTIATE(Rational)
ANONMECH_INSTANTIATE(double)

#undef ANONMECH_INSTANTIATE

}  // namespace anonmech
