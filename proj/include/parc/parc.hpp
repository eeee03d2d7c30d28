#pragma once

// Umbrella header for the parc toolkit: reinforcement learning in
// parameterized (discrete-continuous hybrid) action spaces.

#include "parc/action_space.hpp"
#include "parc/actor_set.hpp"
#include "parc/adam.hpp"
#include "parc/checkpoint.hpp"
#include "parc/config.hpp"
#include "parc/distributions.hpp"
#include "parc/dqn.hpp"
#include "parc/envs/registry.hpp"
#include "parc/envs/scripted.hpp"
#include "parc/errors.hpp"
#include "parc/harness.hpp"
#include "parc/hppo.hpp"
#include "parc/matrix.hpp"
#include "parc/mlp.hpp"
#include "parc/policy.hpp"
#include "parc/rng.hpp"
#include "parc/rollout.hpp"
#include "parc/stats.hpp"
