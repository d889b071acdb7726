#pragma once

#include "artout/core/dataset.hpp"
#include "artout/core/distributions.hpp"
#include "artout/core/enclosing_ball.hpp"
#include "artout/core/error.hpp"
#include "artout/core/neighbors.hpp"
#include "artout/core/rng.hpp"
