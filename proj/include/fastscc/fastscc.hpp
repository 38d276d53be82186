#pragma once

#include "fastscc/bootstrap.hpp"
#include "fastscc/cluster.hpp"
#include "fastscc/csv.hpp"
#include "fastscc/padjust.hpp"
#include "fastscc/parallel.hpp"
#include "fastscc/procedure.hpp"
#include "fastscc/rank_tests.hpp"
#include "fastscc/rng.hpp"
#include "fastscc/simlab.hpp"
#include "fastscc/stats.hpp"
#include "fastscc/survival.hpp"

namespace fastscc {
inline constexpr const char* version = "0.1.0";
}
