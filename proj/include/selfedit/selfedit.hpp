#pragma once

// Umbrella header for the selfedit library: self-editing programs in a
// minimal code DSL, diagonalization searches over their history, and the
// seeded population loop that lets reaction rules emerge from reward and
// punishment.

#include "selfedit/code.hpp"
#include "selfedit/config.hpp"
#include "selfedit/diagonal.hpp"
#include "selfedit/engine.hpp"
#include "selfedit/enumerate.hpp"
#include "selfedit/eval.hpp"
#include "selfedit/experiment.hpp"
#include "selfedit/io.hpp"
#include "selfedit/organism.hpp"
#include "selfedit/policy.hpp"
#include "selfedit/rational.hpp"
#include "selfedit/reward.hpp"
#include "selfedit/rng.hpp"
#include "selfedit/text.hpp"
