#pragma once

#include <stdexcept>
#include <vector>

#include "switchlab/causal/structure.hpp"

namespace switchlab::causal {

// One observed transition in macro-variable space.
struct LowDimStep {
  LightState before;
  int action = 0;
  LightState after;
};

// Exact identification failed: every candidate contradicts the evidence.
struct InconsistentEvidenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact identification failed: more than one candidate fits the evidence.
struct AmbiguousEvidenceError : std::runtime_error {
  AmbiguousEvidenceError(const std::string& msg, long survivor_count)
      : std::runtime_error(msg), survivors(survivor_count) {}
  long survivors;
};

// Consistency filtering over the exhaustive family enumeration: simulate
// every candidate structure from the all-off switch state through the
// observed actions and keep those reproducing every before/after light
// state. Returns the unique survivor or throws one of the errors above.
// Intended for n <= 7 (the largest enumeration is n^n candidates).
CausalStructure analytic_induce(StructureFamily family, int n,
                                const std::vector<LowDimStep>& trajectory);

// Survivor count only (no uniqueness requirement); shares the filter above.
long count_consistent_structures(StructureFamily family, int n,
                                 const std::vector<LowDimStep>& trajectory);

}  // namespace switchlab::causal
