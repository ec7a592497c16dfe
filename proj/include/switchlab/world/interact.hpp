#pragma once

#include "switchlab/world/env.hpp"
#include "switchlab/world/trajectory.hpp"

namespace switchlab::world {

// The heuristic interaction policy. Non-Masterswitch families: press every
// switch exactly once in a uniformly random order (H = n). Masterswitch:
// press switches in random order until something visibly changes, then press
// every remaining switch, then re-press the earlier switches except the one
// that caused the change (H <= 2n-1). Starts from the all-off state; the
// result is padded to trajectory_h_max.
InteractionSample heuristic_interact(const causal::CausalStructure& structure,
                                     const Floorplan& plan, uint64_t seed, bool noise = true);

}  // namespace switchlab::world
