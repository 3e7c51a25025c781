#pragma once

#include "anonmech/market.hpp"

namespace anonmech::fixtures {

/// Two periods, atoms {2/3, 1}: mass one at value 1 arrives first, mass one
/// at value 2/3 second; inventory 3/2; no discounting. Rationing beats
/// posted prices here.
Market ex_ration();

/// Two periods, atoms {1/2, 1}: mass one at value 1 arrives first, mass one
/// at value 1/2 second; unbounded inventory; no discounting.
Market ex_twogen();

}  // namespace anonmech::fixtures
