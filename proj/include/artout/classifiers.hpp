#pragma once

#include "artout/classifiers/model.hpp"
#include "artout/classifiers/training.hpp"
#include "artout/classifiers/tuning.hpp"
