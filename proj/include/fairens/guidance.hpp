#pragma once

#include "fairens/guidance/diagram.hpp"
#include "fairens/guidance/emit.hpp"
#include "fairens/guidance/standardize.hpp"
