#pragma once

// Umbrella header: the complete data-driven one-step safety certification
// toolkit (sample-size planning, scenario programs, certificates, and
// empirical validation).

#include "pacsafe/basis.hpp"
#include "pacsafe/benchmarks.hpp"
#include "pacsafe/certify.hpp"
#include "pacsafe/config.hpp"
#include "pacsafe/distributions.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/log.hpp"
#include "pacsafe/lp.hpp"
#include "pacsafe/params.hpp"
#include "pacsafe/planner.hpp"
#include "pacsafe/plugin.hpp"
#include "pacsafe/presets.hpp"
#include "pacsafe/rng.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/samples.hpp"
#include "pacsafe/scenario_lp.hpp"
#include "pacsafe/system.hpp"
#include "pacsafe/types.hpp"
#include "pacsafe/validate.hpp"
