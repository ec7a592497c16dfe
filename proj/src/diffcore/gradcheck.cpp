#include "switchlab/diffcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace switchlab::diff {

GradCheckResult check_gradients(const std::vector<Parameter*>& params,
                                const std::function<double()>& loss,
                                const GradCheckOptions& opts) {
  GradCheckResult result;
  Rng pick(opts.sample_seed, 0x67c5);
  for (Parameter* p : params) {
    long n = p->numel();
    std::vector<long> indices;
    if (opts.samples_per_param > 0 && opts.samples_per_param < n) {
      for (int k = 0; k < opts.samples_per_param; ++k)
        indices.push_back(pick.below(static_cast<int>(n)));
    } else {
      indices.resize(n);
      for (long i = 0; i < n; ++i) indices[i] = i;
    }
    for (long idx : indices) {
      float original = p->value.data[idx];
      float hi = static_cast<float>(static_cast<double>(original) + opts.h);
      float lo = static_cast<float>(static_cast<double>(original) - opts.h);

      p->value.data[idx] = hi;
      double f_hi = loss();
      p->value.data[idx] = lo;
      double f_lo = loss();
      p->value.data[idx] = original;

      // Use the realized float step so rounding of the perturbation itself
      // does not pollute the estimate.
      double actual_2h = static_cast<double>(hi) - static_cast<double>(lo);
      double numeric = (f_hi - f_lo) / actual_2h;
      double analytic = static_cast<double>(p->grad.data[idx]);
      double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-2});
      double rel = std::abs(numeric - analytic) / denom;
      result.checked += 1;
      if (rel > result.max_rel_err) {
        result.max_rel_err = rel;
        result.worst = p->name + "[" + std::to_string(idx) + "]";
      }
    }
  }
  return result;
}

}  // namespace switchlab::diff
