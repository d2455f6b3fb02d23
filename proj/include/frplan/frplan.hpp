#pragma once

// Umbrella header: passive-reflector placement and rotation planning.

#include "frplan/coverage.hpp"
#include "frplan/errors.hpp"
#include "frplan/fr_optimizer.hpp"
#include "frplan/geometry.hpp"
#include "frplan/link_budget.hpp"
#include "frplan/mr_optimizer.hpp"
#include "frplan/numeric.hpp"
#include "frplan/scenario.hpp"
