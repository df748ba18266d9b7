#pragma once

#include "fairens/pipeline/expr.hpp"
#include "fairens/pipeline/fit.hpp"
#include "fairens/pipeline/validate.hpp"
