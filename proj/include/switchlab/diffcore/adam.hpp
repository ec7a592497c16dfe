#pragma once

#include <vector>

#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

struct AdamConfig {
  float lr = 1e-4f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps = 1e-8f;
};

// Bias-corrected Adam update over all parameters. Validates every gradient
// before touching any value (a non-finite gradient aborts with the parameter
// name and step, leaving parameters unchanged). Gradients are zeroed after a
// successful step and each parameter's step_count is incremented.
void adam_step(const std::vector<Parameter*>& params, const AdamConfig& cfg);

}  // namespace switchlab::diff
