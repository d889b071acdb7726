#pragma once

#include "artout/bench.hpp"
#include "artout/classifiers.hpp"
#include "artout/core.hpp"
#include "artout/csv.hpp"
#include "artout/filters.hpp"
#include "artout/generators.hpp"
#include "artout/preprocess.hpp"
#include "artout/stats.hpp"
