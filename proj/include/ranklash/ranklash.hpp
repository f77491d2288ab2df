#pragma once

#include "ranklash/core.hpp"
#include "ranklash/export.hpp"
#include "ranklash/multiplayer.hpp"
#include "ranklash/numerics.hpp"
#include "ranklash/parallel.hpp"
#include "ranklash/rng.hpp"
#include "ranklash/simulator.hpp"
#include "ranklash/sweep.hpp"
#include "ranklash/thresholds.hpp"
#include "ranklash/value_funcs.hpp"
