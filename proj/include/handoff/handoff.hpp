#pragma once

#include "handoff/analytic.hpp"
#include "handoff/errors.hpp"
#include "handoff/experiments.hpp"
#include "handoff/geometry.hpp"
#include "handoff/montecarlo.hpp"
#include "handoff/output.hpp"
#include "handoff/rng.hpp"
#include "handoff/scenario.hpp"
#include "handoff/topology.hpp"
#include "handoff/version.hpp"
