#pragma once

#include "fairens/core.hpp"
#include "fairens/csv.hpp"
#include "fairens/dataset.hpp"
#include "fairens/guidance.hpp"
#include "fairens/harness.hpp"
#include "fairens/learners.hpp"
#include "fairens/metrics.hpp"
#include "fairens/mitigation.hpp"
#include "fairens/pipeline.hpp"
