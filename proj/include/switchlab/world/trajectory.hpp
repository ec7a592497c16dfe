#pragma once

#include <vector>

#include "switchlab/causal/analytic.hpp"
#include "switchlab/causal/structure.hpp"
#include "switchlab/world/render.hpp"

namespace switchlab::world {

// One interaction episode, padded to h_max for batching: padded steps carry
// the no-op action (index n) and repeat the final observation.
struct Trajectory {
  int structure_id = -1;
  int n = 0;
  int h_max = 0;
  int length = 0;                        // real steps before padding
  std::vector<uint8_t> actions;          // size h_max; value n = no-op pad
  std::vector<Observation> observations; // h_max + 1

  bool operator==(const Trajectory&) const = default;
};

// n for the single-pass families, 2n-1 for Masterswitch.
int trajectory_h_max(int n, causal::StructureFamily family);

// A trajectory together with its macro-variable transcript (used by the
// exact-identification oracle and debugging tools; learned models only ever
// see the pixels).
struct InteractionSample {
  Trajectory trajectory;
  std::vector<causal::LowDimStep> low_dim;
};

}  // namespace switchlab::world
