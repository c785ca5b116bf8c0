#pragma once

// Umbrella header.

#include "slicebench/error.hpp"
#include "slicebench/rng.hpp"
#include "slicebench/telemetry.hpp"
#include "slicebench/io.hpp"
#include "slicebench/sim.hpp"
#include "slicebench/defaults.hpp"
#include "slicebench/features.hpp"
#include "slicebench/clustering.hpp"
#include "slicebench/mars.hpp"
#include "slicebench/identify.hpp"
#include "slicebench/overhead.hpp"
#include "slicebench/pipeline.hpp"
#include "slicebench/cli.hpp"
