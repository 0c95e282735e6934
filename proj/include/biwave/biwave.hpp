#pragma once

// Umbrella header.

#include "biwave/checks.hpp"
#include "biwave/conservation.hpp"
#include "biwave/density.hpp"
#include "biwave/evolution.hpp"
#include "biwave/field.hpp"
#include "biwave/grid.hpp"
#include "biwave/io.hpp"
#include "biwave/multibody.hpp"
#include "biwave/observable.hpp"
#include "biwave/operators.hpp"
#include "biwave/potential.hpp"
#include "biwave/propagator.hpp"
#include "biwave/scenario.hpp"
#include "biwave/scenario_runners.hpp"
