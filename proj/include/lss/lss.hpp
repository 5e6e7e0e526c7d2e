#pragma once

#include "lss/experiment.hpp"
#include "lss/filters.hpp"
#include "lss/item.hpp"
#include "lss/metrics.hpp"
#include "lss/oracle.hpp"
#include "lss/predictors.hpp"
#include "lss/sketch.hpp"
#include "lss/space_saving.hpp"
#include "lss/workload.hpp"
