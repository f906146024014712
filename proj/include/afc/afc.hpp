#pragma once

// Umbrella header for the whole library.

#include "afc/mesh.hpp"
#include "afc/sparse.hpp"
#include "afc/quadrature.hpp"
#include "afc/flux.hpp"
#include "afc/fem.hpp"
#include "afc/limiter.hpp"
#include "afc/time_integration.hpp"
#include "afc/problems.hpp"
#include "afc/experiments.hpp"
