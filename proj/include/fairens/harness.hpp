#pragma once

#include "fairens/harness/cv.hpp"
#include "fairens/harness/grid.hpp"
#include "fairens/harness/search.hpp"
#include "fairens/harness/select.hpp"
#include "fairens/harness/store.hpp"
