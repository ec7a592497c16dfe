#include "switchlab/world/env.hpp"

#include <stdexcept>

namespace switchlab::world {

Env::Env(const causal::CausalStructure& structure, const Floorplan& plan, EnvConfig cfg)
    : structure_(structure), plan_(plan), cfg_(cfg), rng_(cfg.seed, 0x9e1) {
  if (plan.n != structure.n) {
    throw std::invalid_argument("floorplan has " + std::to_string(plan.n) +
                                " lights but structure has n=" + std::to_string(structure.n));
  }
  if (cfg_.horizon <= 0) throw std::invalid_argument("env horizon must be positive");
}

Observation Env::reset(InitMode mode) {
  steps_ = 0;
  switches_ = causal::SwitchState{};
  if (mode == InitMode::RandomSwitches) {
    for (int i = 0; i < structure_.n; ++i) switches_.set(i, rng_.below(2) == 1);
  }
  return observe();
}

Observation Env::step(int action) {
  if (steps_ >= cfg_.horizon) {
    throw std::logic_error("env step beyond horizon " + std::to_string(cfg_.horizon));
  }
  switches_ = causal::press(switches_, structure_.n, action);
  steps_ += 1;
  return observe();
}

causal::LightState Env::lights() const { return causal::lights_of(structure_, switches_); }

Observation Env::observe() {
  return render(plan_, lights(), cfg_.observation_noise ? &rng_ : nullptr);
}

std::pair<causal::LightState, Observation> sample_goal(const causal::CausalStructure& structure,
                                                       const Floorplan& plan,
                                                       causal::LightState current,
                                                       diff::Rng& rng) {
  auto reachable = reachable_light_configs(structure);
  std::vector<causal::LightState> options;
  options.reserve(reachable.size());
  for (const auto& l : reachable) {
    if (!(l == current)) options.push_back(l);
  }
  if (options.empty()) {
    throw std::runtime_error("sample_goal: only one reachable light configuration");
  }
  causal::LightState goal = options[rng.below(static_cast<int>(options.size()))];
  return {goal, render(plan, goal, nullptr)};
}

}  // namespace switchlab::world
