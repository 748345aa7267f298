#pragma once

// Umbrella header for the tentlab verification library.

#include "tentlab/algebra.hpp"
#include "tentlab/config.hpp"
#include "tentlab/dyadic.hpp"
#include "tentlab/fixtures.hpp"
#include "tentlab/general_hardy.hpp"
#include "tentlab/generator.hpp"
#include "tentlab/hardy_bmo.hpp"
#include "tentlab/lhalf.hpp"
#include "tentlab/quadrature.hpp"
#include "tentlab/registry.hpp"
#include "tentlab/report.hpp"
#include "tentlab/rng.hpp"
#include "tentlab/runner.hpp"
#include "tentlab/semigroup.hpp"
#include "tentlab/subordination.hpp"
#include "tentlab/tent.hpp"
#include "tentlab/time_grid.hpp"
