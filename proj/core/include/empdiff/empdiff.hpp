#pragma once

#include "empdiff/dataset.hpp"
#include "empdiff/errors.hpp"
#include "empdiff/experiments.hpp"
#include "empdiff/forward.hpp"
#include "empdiff/metrics.hpp"
#include "empdiff/predictors.hpp"
#include "empdiff/rng.hpp"
#include "empdiff/samplers.hpp"
#include "empdiff/schedule.hpp"
#include "empdiff/target.hpp"
