#pragma once

#include <string>
#include <string_view>

#include "anonmech/evaluator.hpp"

namespace anonmech {

/// Profile file: {"T": n, "periods": [[{"at": "2/3", "closed": true, "level": "1/2"}, ...], ...]}.
/// Numbers are written as strings; fractions and decimals are both read.
template <class S>
std::string profile_to_json(const AllocationProfile<S>& a);

/// Throws ParseError on malformed documents and DomainError on jump lists
/// that are not canonical monotone step functions.
template <class S>
AllocationProfile<S> parse_profile(std::string_view json_text);

}  // namespace anonmech
