#pragma once

#include "ramanujan/eval_result.hpp"
#include "ramanujan/expr.hpp"
#include "ramanujan/harness.hpp"
#include "ramanujan/phi.hpp"
#include "ramanujan/quad.hpp"
#include "ramanujan/rmt.hpp"
#include "ramanujan/series.hpp"
#include "ramanujan/specfun.hpp"
