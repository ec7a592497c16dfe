#pragma once

#include "switchlab/causal/structure.hpp"

namespace switchlab::causal {

struct F1Result {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Edge-level F1 after thresholding the estimate: predicted edge iff
// weight > threshold. Masterswitch truths additionally score the n
// master-indicator entries. Empty-vs-empty counts as a perfect match;
// predicting nothing when the truth has edges scores 0.
F1Result f1_score(const CausalGraphEstimate& estimate, const CausalStructure& truth,
                  double threshold = 0.5);

}  // namespace switchlab::causal
