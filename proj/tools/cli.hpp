#pragma once

#include <ostream>

namespace anonmech::cli {

/// Exit codes: 0 success, 1 verification failure, 2 bad input or usage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anonmech::cli
