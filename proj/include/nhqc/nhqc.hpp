#pragma once

#include "errors.hpp"
#include "linalg.hpp"
#include "time_grid.hpp"
#include "operator.hpp"
#include "dynamics.hpp"
#include "dyson.hpp"
#include "scalar_function.hpp"
#include "frame.hpp"
#include "models.hpp"
#include "synthesis.hpp"
#include "schedule.hpp"
#include "config.hpp"
#include "scenario.hpp"
#include "export.hpp"
