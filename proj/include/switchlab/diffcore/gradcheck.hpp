#pragma once

#include <functional>
#include <string>
#include <vector>

#include "switchlab/diffcore/rng.hpp"
#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

// Central finite-difference check of analytic gradients.
//
// Protocol: the caller runs one traced forward/backward pass so that every
// Parameter.grad holds the analytic gradient, then calls check_gradients
// with a loss closure that re-evaluates the exact same loss from scratch
// (any dropout rng must be re-seeded inside the closure so masks repeat).
// The checker perturbs parameter values in place, accumulates differences in
// double precision, and restores the original values.
struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst;  // "param[i]" of the worst element
  long checked = 0;

  bool ok(double tol) const { return checked > 0 && max_rel_err < tol; }
};

struct GradCheckOptions {
  double h = 1e-3;
  // Elements checked per parameter; <=0 means all of them.
  int samples_per_param = 0;
  uint64_t sample_seed = 0;
};

GradCheckResult check_gradients(const std::vector<Parameter*>& params,
                                const std::function<double()>& loss,
                                const GradCheckOptions& opts = {});

}  // namespace switchlab::diff
