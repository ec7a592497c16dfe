#include "switchlab/causal/metrics.hpp"

#include <stdexcept>

namespace switchlab::causal {

F1Result f1_score(const CausalGraphEstimate& estimate, const CausalStructure& truth,
                  double threshold) {
  if (estimate.n != truth.n) {
    throw std::invalid_argument("f1_score: estimate is " + std::to_string(estimate.n) +
                                "x" + std::to_string(estimate.n) + " but truth has n=" +
                                std::to_string(truth.n));
  }
  if (estimate.weights.size() != static_cast<size_t>(truth.n) * truth.n) {
    throw std::invalid_argument("f1_score: estimate weight matrix has wrong size");
  }
  bool master_family = truth.family == StructureFamily::Masterswitch;
  if (master_family && estimate.master_weights.size() != static_cast<size_t>(truth.n)) {
    throw std::invalid_argument(
        "f1_score: masterswitch truth requires a master indicator row of size n");
  }

  long tp = 0, fp = 0, fn = 0;
  auto tally = [&](bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    else if (predicted && !actual) ++fp;
    else if (!predicted && actual) ++fn;
  };
  for (int i = 0; i < truth.n; ++i)
    for (int j = 0; j < truth.n; ++j)
      tally(estimate.at(i, j) > threshold, truth.edge(i, j));
  if (master_family) {
    for (int j = 0; j < truth.n; ++j)
      tally(estimate.master_weights[j] > threshold, j == truth.master);
  }

  F1Result r;
  if (tp + fp == 0 && fn == 0) {
    r.f1 = r.precision = r.recall = 1.0;  // both empty
    return r;
  }
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 1.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

}  // namespace switchlab::causal
