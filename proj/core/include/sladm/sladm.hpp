#pragma once

#include "sladm/admissibility.hpp"
#include "sladm/error.hpp"
#include "sladm/expanding_grid.hpp"
#include "sladm/expression.hpp"
#include "sladm/format.hpp"
#include "sladm/fundamental_system.hpp"
#include "sladm/hardy.hpp"
#include "sladm/local_scale.hpp"
#include "sladm/potential.hpp"
#include "sladm/quadrature.hpp"
#include "sladm/roots.hpp"
