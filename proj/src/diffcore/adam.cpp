#include "switchlab/diffcore/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace switchlab::diff {

void adam_step(const std::vector<Parameter*>& params, const AdamConfig& cfg) {
  // Validate first so a bad gradient never leaves parameters half-updated.
  for (const Parameter* p : params) {
    if (!p->grad.all_finite()) {
      throw std::runtime_error("non-finite gradient in parameter '" + p->name + "' at step " +
                               std::to_string(p->step_count + 1));
    }
  }
  for (Parameter* p : params) {
    p->step_count += 1;
    double t = static_cast<double>(p->step_count);
    double bc1 = 1.0 - std::pow(static_cast<double>(cfg.beta1), t);
    double bc2 = 1.0 - std::pow(static_cast<double>(cfg.beta2), t);
    float* v = p->value.ptr();
    float* g = p->grad.ptr();
    float* m1 = p->adam_m.ptr();
    float* m2 = p->adam_v.ptr();
    long n = p->numel();
    for (long i = 0; i < n; ++i) {
      m1[i] = cfg.beta1 * m1[i] + (1.0f - cfg.beta1) * g[i];
      m2[i] = cfg.beta2 * m2[i] + (1.0f - cfg.beta2) * g[i] * g[i];
      double mhat = m1[i] / bc1;
      double vhat = m2[i] / bc2;
      v[i] -= static_cast<float>(cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps));
      g[i] = 0.0f;
    }
  }
}

}  // namespace switchlab::diff
