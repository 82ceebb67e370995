#pragma once

#include "ncw/analytic.hpp"
#include "ncw/battle.hpp"
#include "ncw/core.hpp"
#include "ncw/integrator.hpp"
#include "ncw/oracle.hpp"
