// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include "d2dcache/cache.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/energy.hpp"
#include "d2dcache/experiment.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/io.hpp"
#include "d2dcache/monte_carlo.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/special.hpp"
