#pragma once

#include "anonmech/coordinate.hpp"
#include "anonmech/equilibrium.hpp"
#include "anonmech/evaluator.hpp"
#include "anonmech/fixtures.hpp"
#include "anonmech/market.hpp"
#include "anonmech/mechanism.hpp"
#include "anonmech/numeric.hpp"
#include "anonmech/oracle.hpp"
#include "anonmech/piecewise_linear.hpp"
#include "anonmech/profile_io.hpp"
#include "anonmech/step_function.hpp"
