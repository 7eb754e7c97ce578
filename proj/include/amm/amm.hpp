// SPDX-License-Identifier: Apache-2.0
// Umbrella header.
#pragma once

#include "amm/error.hpp"
#include "amm/linalg.hpp"
#include "amm/random.hpp"
#include "amm/quadrature.hpp"
#include "amm/sector.hpp"
#include "amm/funcalc.hpp"
#include "amm/means.hpp"
#include "amm/maps.hpp"
#include "amm/verify.hpp"
#include "amm/io.hpp"
