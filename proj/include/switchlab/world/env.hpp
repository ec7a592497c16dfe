#pragma once

#include "switchlab/causal/structure.hpp"
#include "switchlab/world/render.hpp"

namespace switchlab::world {

enum class InitMode { AllOff, RandomSwitches };

struct EnvConfig {
  bool observation_noise = true;
  int horizon = 0;  // max steps per episode
  uint64_t seed = 0;
};

// One interactive episode environment over a fixed causal structure.
class Env {
 public:
  Env(const causal::CausalStructure& structure, const Floorplan& plan, EnvConfig cfg);

  Observation reset(InitMode mode);

  // Toggles a switch (or the reserved no-op n) and renders the result.
  // Throws once the step counter would exceed the horizon.
  Observation step(int action);

  causal::SwitchState switches() const { return switches_; }
  causal::LightState lights() const;
  int steps_taken() const { return steps_; }
  const causal::CausalStructure& structure() const { return structure_; }
  const Floorplan& plan() const { return plan_; }

 private:
  Observation observe();

  const causal::CausalStructure& structure_;
  const Floorplan& plan_;
  EnvConfig cfg_;
  diff::Rng rng_;
  causal::SwitchState switches_;
  int steps_ = 0;
};

// Uniform draw from reachable_light_configs(structure) minus the current
// configuration, rendered noise-free. Throws if nothing but `current` is
// reachable.
std::pair<causal::LightState, Observation> sample_goal(const causal::CausalStructure& structure,
                                                       const Floorplan& plan,
                                                       causal::LightState current,
                                                       diff::Rng& rng);

}  // namespace switchlab::world
