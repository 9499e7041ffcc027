// Umbrella header.
#pragma once

#include "kahler/core.hpp"
#include "kahler/domain.hpp"
#include "kahler/field.hpp"
#include "kahler/quadrature.hpp"
#include "kahler/grid.hpp"
#include "kahler/linalg.hpp"
#include "kahler/calculus.hpp"
#include "kahler/levi.hpp"
#include "kahler/kernel.hpp"
#include "kahler/mollify.hpp"
#include "kahler/atlas.hpp"
#include "kahler/cocycle.hpp"
#include "kahler/cover.hpp"
#include "kahler/report.hpp"
#include "kahler/smoothing.hpp"
#include "kahler/scenarios.hpp"
