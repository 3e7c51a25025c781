#include "anonmech/profile_io.hpp"

#include "json.hpp"

namespace anonmech {

using nlohmann::json;

template <class S>
std::string profile_to_json(const AllocationProfile<S>& a) {
  json doc = json::object();
  doc["T"] = a.periods();
  json periods = json::array();
  for (const auto& f : a.r) {
    json jumps = json::array();
    for (const auto& jp : f.jumps()) {
      jumps.push_back({{"at", Scalar<S>::format(jp.at)}, {"closed", jp.closed}, {"level", Scalar<S>::format(jp.level)}});
    }
    periods.push_back(std::move(jumps));
  }
  doc["periods"] = std::move(periods);
  return doc.dump(2) + "\n";
}

namespace {

Rational read_number(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_float()) return rational_from_double(j.get<double>());
  } catch (const NumberFormatError& e) {
    throw ParseError(where + ": " + e.what(), 0, where);
  }
  throw ParseError(where + ": expected a number", 0, where);
}

}  // namespace

template <class S>
AllocationProfile<S> parse_profile(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0, "");
  }
  if (!doc.is_object() || !doc.contains("periods") || !doc["periods"].is_array()) {
    throw ParseError("profile document needs a 'periods' array", 0, "periods");
  }
  const json& periods = doc["periods"];
  if (doc.contains("T") && (!doc["T"].is_number_integer() || doc["T"].get<std::int64_t>() !=
                                                                  static_cast<std::int64_t>(periods.size()))) {
    throw ParseError("'T' does not match the number of periods", 0, "T");
  }
  AllocationProfile<S> a;
  for (std::size_t t = 0; t < periods.size(); ++t) {
    const std::string where = "periods[" + std::to_string(t) + "]";
    if (!periods[t].is_array()) throw ParseError(where + ": expected a list of jumps", 0, where);
    std::vector<Jump<S>> jumps;
    for (std::size_t j = 0; j < periods[t].size(); ++j) {
      const json& jp = periods[t][j];
      const std::string at = where + "[" + std::to_string(j) + "]";
      if (!jp.is_object() || !jp.contains("at") || !jp.contains("level")) {
        throw ParseError(at + ": a jump needs 'at' and 'level'", 0, at);
      }
      bool closed = true;
      if (jp.contains("closed")) {
        if (!jp["closed"].is_boolean()) throw ParseError(at + ".closed: expected true or false", 0, at);
        closed = jp["closed"].get<bool>();
      }
      jumps.push_back({scalar_cast<S>(read_number(jp["at"], at + ".at")), closed,
                       scalar_cast<S>(read_number(jp["level"], at + ".level"))});
    }
    a.r.emplace_back(std::move(jumps));
  }
  return a;
}

template std::string profile_to_json<Rational>(const AllocationProfile<Rational>&);
template std::string profile_to_json<double>(const AllocationProfile<double>&);
template AllocationProfile<Rational> parse_profile<Rational>(std::string_view);
template AllocationProfile<double> parse_profile<double>(std::string_view);

}  // namespace anonmech
