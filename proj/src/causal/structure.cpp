#include "switchlab/causal/structure.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <stdexcept>

namespace switchlab::causal {

const char* family_name(StructureFamily f) {
  switch (f) {
    case StructureFamily::OneToOne: return "one_to_one";
    case StructureFamily::OneToMany: return "one_to_many";
    case StructureFamily::ManyToOne: return "many_to_one";
    case StructureFamily::Masterswitch: return "masterswitch";
  }
  return "?";
}

StructureFamily family_from_name(const std::string& name) {
  for (StructureFamily f : kAllFamilies) {
    if (name == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown structure family '" + name + "'");
}

std::vector<uint8_t> BitConfig::to_vector(int n) const {
  std::vector<uint8_t> v(n);
  for (int i = 0; i < n; ++i) v[i] = get(i) ? 1 : 0;
  return v;
}

BitConfig BitConfig::from_vector(const std::vector<uint8_t>& v) {
  BitConfig c;
  for (size_t i = 0; i < v.size(); ++i) c.set(static_cast<int>(i), v[i] != 0);
  return c;
}

uint32_t CausalStructure::row_mask(int sw) const {
  uint32_t mask = 0;
  const uint8_t* row = adj.data() + static_cast<size_t>(sw) * n;
  for (int j = 0; j < n; ++j) mask |= static_cast<uint32_t>(row[j] != 0) << j;
  return mask;
}

void CausalStructure::validate() const {
  if (n < 2 || n > 16) throw std::invalid_argument("structure size must be in [2,16]");
  if (adj.size() != static_cast<size_t>(n) * n) {
    throw std::invalid_argument("adjacency size does not match n");
  }
  for (uint8_t v : adj) {
    if (v > 1) throw std::invalid_argument("adjacency entries must be 0/1");
  }
  auto row_sum = [&](int i) {
    int s = 0;
    for (int j = 0; j < n; ++j) s += edge(i, j);
    return s;
  };
  auto col_sum = [&](int j) {
    int s = 0;
    for (int i = 0; i < n; ++i) s += edge(i, j);
    return s;
  };
  switch (family) {
    case StructureFamily::OneToOne:
      for (int i = 0; i < n; ++i) {
        if (row_sum(i) != 1) throw std::invalid_argument("one_to_one: row sum != 1");
        if (col_sum(i) != 1) throw std::invalid_argument("one_to_one: column sum != 1");
      }
      if (master != -1) throw std::invalid_argument("one_to_one: unexpected master index");
      break;
    case StructureFamily::OneToMany:
      for (int j = 0; j < n; ++j) {
        if (col_sum(j) != 1) throw std::invalid_argument("one_to_many: column sum != 1");
      }
      if (master != -1) throw std::invalid_argument("one_to_many: unexpected master index");
      break;
    case StructureFamily::ManyToOne:
      for (int i = 0; i < n; ++i) {
        if (row_sum(i) != 1) throw std::invalid_argument("many_to_one: row sum != 1");
      }
      if (master != -1) throw std::invalid_argument("many_to_one: unexpected master index");
      break;
    case StructureFamily::Masterswitch: {
      if (master < 0 || master >= n) throw std::invalid_argument("masterswitch: bad master index");
      if (row_sum(master) != 0) throw std::invalid_argument("masterswitch: master row not empty");
      uint32_t used = 0;
      for (int i = 0; i < n; ++i) {
        if (i == master) continue;
        if (row_sum(i) != 1) throw std::invalid_argument("masterswitch: row sum != 1");
        uint32_t mask = row_mask(i);
        if (used & mask) throw std::invalid_argument("masterswitch: two switches share a light");
        used |= mask;
      }
      break;
    }
  }
}

CausalGraphEstimate CausalGraphEstimate::zeros(int n, bool with_master_row) {
  CausalGraphEstimate e;
  e.n = n;
  e.weights.assign(static_cast<size_t>(n) * n, 0.0f);
  if (with_master_row) e.master_weights.assign(n, 0.0f);
  return e;
}

CausalGraphEstimate CausalGraphEstimate::from_truth(const CausalStructure& truth) {
  CausalGraphEstimate e = zeros(truth.n, truth.family == StructureFamily::Masterswitch);
  for (int i = 0; i < truth.n; ++i)
    for (int j = 0; j < truth.n; ++j) e.at(i, j) = truth.edge(i, j) ? 1.0f : 0.0f;
  if (truth.family == StructureFamily::Masterswitch) e.master_weights[truth.master] = 1.0f;
  return e;
}

CausalStructure sample_structure(int n, StructureFamily family, diff::Rng& rng) {
  if (n < 2) throw std::invalid_argument("sample_structure requires n >= 2");
  if (n > 16) throw std::invalid_argument("sample_structure requires n <= 16");
  CausalStructure s;
  s.n = n;
  s.family = family;
  s.adj.assign(static_cast<size_t>(n) * n, 0);
  auto link = [&](int sw, int light) { s.adj[static_cast<size_t>(sw) * n + light] = 1; };
  switch (family) {
    case StructureFamily::OneToOne: {
      std::vector<int> lights(n);
      std::iota(lights.begin(), lights.end(), 0);
      rng.shuffle(lights);
      for (int i = 0; i < n; ++i) link(i, lights[i]);
      break;
    }
    case StructureFamily::OneToMany:
      for (int j = 0; j < n; ++j) link(rng.below(n), j);
      break;
    case StructureFamily::ManyToOne:
      for (int i = 0; i < n; ++i) link(i, rng.below(n));
      break;
    case StructureFamily::Masterswitch: {
      s.master = rng.below(n);
      std::vector<int> lights(n);
      std::iota(lights.begin(), lights.end(), 0);
      rng.shuffle(lights);
      int next = 0;
      for (int i = 0; i < n; ++i) {
        if (i == s.master) continue;
        link(i, lights[next++]);
      }
      break;
    }
  }
  return s;
}

LightState lights_of(const CausalStructure& structure, SwitchState x) {
  LightState lights;
  if (structure.family == StructureFamily::Masterswitch && !x.get(structure.master)) {
    return lights;
  }
  for (int i = 0; i < structure.n; ++i) {
    if (x.get(i)) lights.bits ^= structure.row_mask(i);
  }
  return lights;
}

SwitchState press(SwitchState x, int n, int action) {
  if (action < 0 || action > n) {
    throw std::invalid_argument("press: action " + std::to_string(action) +
                                " out of range for n=" + std::to_string(n));
  }
  if (action == n) return x;  // no-op slot
  x.toggle(action);
  return x;
}

std::vector<LightState> reachable_light_configs(const CausalStructure& structure) {
  if (structure.n > 16) throw std::invalid_argument("reachable_light_configs requires n <= 16");
  std::vector<LightState> out;
  out.reserve(1u << structure.n);
  for (uint32_t bits = 0; bits < (1u << structure.n); ++bits) {
    out.push_back(lights_of(structure, SwitchState{{bits}}));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

uint64_t saturating_mul(uint64_t a, uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

uint64_t pow_sat(uint64_t base, int exp) {
  uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

uint64_t factorial_sat(int n) {
  uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r = saturating_mul(r, i);
  return r;
}

// Structures are indexed by codes in a family-specific space; some codes
// decode to nothing (non-permutations, non-injective maps), which keeps both
// the enumeration and the rejection sampler uniform over valid structures.
struct CodeSpace {
  int n;
  StructureFamily family;
  uint64_t size;  // code count, saturating

  static CodeSpace of(int n, StructureFamily family) {
    return {n, family, pow_sat(static_cast<uint64_t>(n), n)};
  }

  bool decode(uint64_t code, CausalStructure& out) const {
    std::array<int, 16> digit{};
    uint64_t c = code;
    for (int i = 0; i < n; ++i) {
      digit[i] = static_cast<int>(c % n);
      c /= n;
    }
    out.n = n;
    out.family = family;
    out.master = -1;
    out.adj.assign(static_cast<size_t>(n) * n, 0);
    auto link = [&](int sw, int light) { out.adj[static_cast<size_t>(sw) * n + light] = 1; };
    switch (family) {
      case StructureFamily::OneToOne: {
        uint32_t used = 0;
        for (int i = 0; i < n; ++i) {
          uint32_t bit = 1u << digit[i];
          if (used & bit) return false;
          used |= bit;
          link(i, digit[i]);
        }
        return true;
      }
      case StructureFamily::OneToMany:
        for (int j = 0; j < n; ++j) link(digit[j], j);
        return true;
      case StructureFamily::ManyToOne:
        for (int i = 0; i < n; ++i) link(i, digit[i]);
        return true;
      case StructureFamily::Masterswitch: {
        // digit[n-1] selects the master, the rest map the other switches.
        int master = digit[n - 1];
        out.master = master;
        uint32_t used = 0;
        int d = 0;
        for (int i = 0; i < n; ++i) {
          if (i == master) continue;
          uint32_t bit = 1u << digit[d++];
          if (used & bit) return false;
          used |= bit;
        }
        d = 0;
        for (int i = 0; i < n; ++i) {
          if (i == master) continue;
          link(i, digit[d++]);
        }
        return true;
      }
    }
    return false;
  }
};

}  // namespace

uint64_t family_cardinality(int n, StructureFamily family) {
  switch (family) {
    case StructureFamily::OneToOne: return factorial_sat(n);
    case StructureFamily::OneToMany: return pow_sat(n, n);
    case StructureFamily::ManyToOne: return pow_sat(n, n);
    case StructureFamily::Masterswitch: return saturating_mul(n, factorial_sat(n));
  }
  return 0;
}

StructureSplit split_structures(int n, StructureFamily family, int k_train, int k_test,
                                diff::Rng& rng) {
  if (n < 2 || n > 16) throw std::invalid_argument("split_structures requires n in [2,16]");
  if (k_train < 0 || k_test < 1) {
    throw std::invalid_argument("split_structures requires k_train >= 0 and k_test >= 1");
  }
  uint64_t cardinality = family_cardinality(n, family);
  if (cardinality <= static_cast<uint64_t>(k_train)) {
    throw std::invalid_argument("family " + std::string(family_name(family)) + " at n=" +
                                std::to_string(n) + " has only " + std::to_string(cardinality) +
                                " structures; no test structure would remain after k_train=" +
                                std::to_string(k_train));
  }

  CodeSpace space = CodeSpace::of(n, family);
  size_t want = static_cast<size_t>(k_train) +
                std::min<uint64_t>(k_test, cardinality - static_cast<uint64_t>(k_train));
  std::vector<CausalStructure> picked;
  picked.reserve(want);

  constexpr uint64_t kEnumerationCap = 1ull << 22;
  if (space.size <= kEnumerationCap) {
    std::vector<uint64_t> codes(space.size);
    std::iota(codes.begin(), codes.end(), 0ull);
    rng.shuffle(codes);
    CausalStructure s;
    for (uint64_t code : codes) {
      if (picked.size() == want) break;
      if (space.decode(code, s)) picked.push_back(s);
    }
  } else {
    // Sampling a few thousand from a huge space: rejection on duplicates.
    std::set<uint64_t> seen;
    CausalStructure s;
    while (picked.size() < want) {
      uint64_t code = (static_cast<uint64_t>(rng.next_u32()) << 32 | rng.next_u32()) % space.size;
      if (!seen.insert(code).second) continue;
      if (space.decode(code, s)) picked.push_back(s);
    }
  }

  StructureSplit split;
  split.train.assign(picked.begin(), picked.begin() + k_train);
  split.test.assign(picked.begin() + k_train, picked.end());
  return split;
}

}  // namespace switchlab::causal
