#include "switchlab/world/interact.hpp"

#include <numeric>

namespace switchlab::world {

using causal::LowDimStep;
using causal::StructureFamily;

int trajectory_h_max(int n, StructureFamily family) {
  return family == StructureFamily::Masterswitch ? 2 * n - 1 : n;
}

InteractionSample heuristic_interact(const causal::CausalStructure& structure,
                                     const Floorplan& plan, uint64_t seed, bool noise) {
  int n = structure.n;
  int h_max = trajectory_h_max(n, structure.family);
  diff::Rng order_rng(seed, 0x11a);

  Env env(structure, plan, {noise, h_max, diff::derive_seed(seed, 0x0b5)});

  InteractionSample sample;
  Trajectory& traj = sample.trajectory;
  traj.n = n;
  traj.h_max = h_max;
  traj.observations.reserve(h_max + 1);
  traj.observations.push_back(env.reset(InitMode::AllOff));

  auto take = [&](int action) {
    LowDimStep low;
    low.before = env.lights();
    low.action = action;
    traj.observations.push_back(env.step(action));
    traj.actions.push_back(static_cast<uint8_t>(action));
    low.after = env.lights();
    sample.low_dim.push_back(low);
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  order_rng.shuffle(order);

  if (structure.family != StructureFamily::Masterswitch) {
    for (int a : order) take(a);
  } else {
    // Phase 1: press in random order until something visibly changes.
    std::vector<int> pressed;
    int changer = -1;
    size_t next = 0;
    while (changer < 0) {
      causal::LightState before = env.lights();
      int a = order[next++];
      take(a);
      pressed.push_back(a);
      if (!(env.lights() == before)) changer = a;
    }
    // Phase 2: the untouched switches, then the phase-1 presses again minus
    // the one that caused the change (their effects are visible now).
    std::vector<int> rest(order.begin() + next, order.end());
    order_rng.shuffle(rest);
    for (int a : rest) take(a);
    std::vector<int> again;
    for (int a : pressed) {
      if (a != changer) again.push_back(a);
    }
    order_rng.shuffle(again);
    for (int a : again) take(a);
  }

  traj.length = static_cast<int>(traj.actions.size());
  while (static_cast<int>(traj.actions.size()) < h_max) {
    traj.actions.push_back(static_cast<uint8_t>(n));  // no-op pad
    traj.observations.push_back(traj.observations.back());
  }
  return sample;
}

}  // namespace switchlab::world
