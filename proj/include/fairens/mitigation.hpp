#pragma once

#include "fairens/mitigation/calibrated_odds.hpp"
#include "fairens/mitigation/lfr.hpp"
#include "fairens/mitigation/prejudice.hpp"
#include "fairens/mitigation/repair.hpp"
#include "fairens/mitigation/reweighing.hpp"
