#pragma once

#include "fracmap/analysis.hpp"
#include "fracmap/kernel.hpp"
#include "fracmap/maps.hpp"
#include "fracmap/solver.hpp"
#include "fracmap/summation.hpp"
#include "fracmap/sweep.hpp"
#include "fracmap/version.hpp"
