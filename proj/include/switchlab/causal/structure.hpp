#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "switchlab/diffcore/rng.hpp"

namespace switchlab::causal {

// The four wiring families: a bijection, common cause (one switch may feed
// several lights, each light has exactly one controller), common effect
// (each switch feeds exactly one light, lights may share), and a causal
// chain where nothing is visible until the master switch is on.
enum class StructureFamily { OneToOne, OneToMany, ManyToOne, Masterswitch };

const char* family_name(StructureFamily f);
StructureFamily family_from_name(const std::string& name);
constexpr StructureFamily kAllFamilies[] = {
    StructureFamily::OneToOne,
    StructureFamily::OneToMany,
    StructureFamily::ManyToOne,
    StructureFamily::Masterswitch,
};

// Boolean configuration over n <= 16 switches or lights, packed into bits.
struct BitConfig {
  uint32_t bits = 0;

  bool get(int i) const { return (bits >> i) & 1u; }
  void set(int i, bool v) { bits = v ? (bits | (1u << i)) : (bits & ~(1u << i)); }
  void toggle(int i) { bits ^= 1u << i; }
  int count() const { return __builtin_popcount(bits); }
  bool none() const { return bits == 0; }

  std::vector<uint8_t> to_vector(int n) const;
  static BitConfig from_vector(const std::vector<uint8_t>& v);

  auto operator<=>(const BitConfig&) const = default;
};

struct SwitchState : BitConfig {};
struct LightState : BitConfig {};

// Ground-truth wiring: boolean switch -> light adjacency (row = switch,
// column = light) plus the master switch index for Masterswitch.
struct CausalStructure {
  int n = 0;
  StructureFamily family = StructureFamily::OneToOne;
  std::vector<uint8_t> adj;  // n*n row-major, 0/1
  int master = -1;           // Masterswitch only

  bool edge(int sw, int light) const { return adj[static_cast<size_t>(sw) * n + light] != 0; }
  uint32_t row_mask(int sw) const;

  // Throws if any family invariant is violated.
  void validate() const;

  bool operator==(const CausalStructure&) const = default;
};

// Real-valued edge strengths as produced by induction models; row = cause,
// column = light. Masterswitch layouts carry an extra indicator row whose
// column j scores "switch j is the master".
struct CausalGraphEstimate {
  int n = 0;
  std::vector<float> weights;         // n*n row-major
  std::vector<float> master_weights;  // empty, or size n

  float& at(int cause, int light) { return weights[static_cast<size_t>(cause) * n + light]; }
  float at(int cause, int light) const { return weights[static_cast<size_t>(cause) * n + light]; }

  bool has_master_row() const { return !master_weights.empty(); }
  // n*n, or n*n+n with the indicator row.
  int entry_count() const { return n * n + static_cast<int>(master_weights.size()); }

  static CausalGraphEstimate zeros(int n, bool with_master_row);
  static CausalGraphEstimate from_truth(const CausalStructure& truth);
};

// Uniform sample from the family's structure set. n must be >= 2.
CausalStructure sample_structure(int n, StructureFamily family, diff::Rng& rng);

// Parity semantics: a light is on iff an odd number of its controlling
// switches are on; with a master switch everything is dark until the master
// bit is set.
LightState lights_of(const CausalStructure& structure, SwitchState x);

// Toggle one switch. `action` == n is the reserved no-op; > n is an error.
// Toggles register even while a master switch is off.
SwitchState press(SwitchState x, int n, int action);

// Image of lights_of over all 2^n switch states, sorted, deduplicated.
// Requires n <= 16.
std::vector<LightState> reachable_light_configs(const CausalStructure& structure);

// Number of distinct structures in the family at size n (saturating).
uint64_t family_cardinality(int n, StructureFamily family);

struct StructureSplit {
  std::vector<CausalStructure> train;
  std::vector<CausalStructure> test;
};

// Disjoint train/test sets sampled without replacement, uniformly over the
// family. Train gets exactly k_train structures; test gets
// min(k_test, cardinality - k_train). Throws if no test structure would
// remain.
StructureSplit split_structures(int n, StructureFamily family, int k_train, int k_test,
                                diff::Rng& rng);

}  // namespace switchlab::causal
