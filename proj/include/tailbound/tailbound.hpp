// tailbound.hpp
//
// Umbrella header for the whole library.

#pragma once

#include "config.hpp"
#include "distributions.hpp"
#include "exact.hpp"
#include "families.hpp"
#include "format.hpp"
#include "mc_verify.hpp"
#include "parallel.hpp"
#include "presets.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "scalar_ineq.hpp"
#include "special.hpp"
#include "tail_bounds.hpp"
