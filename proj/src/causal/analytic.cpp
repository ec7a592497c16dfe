#include "switchlab/causal/analytic.hpp"

#include <array>
#include <functional>

namespace switchlab::causal {

namespace {

struct Candidate {
  std::array<uint32_t, 16> rows{};  // light mask per switch
  int master = -1;                  // -1 outside Masterswitch
};

// Simulate the candidate from the all-off switch state; true iff every
// observed before/after light state is reproduced.
bool consistent(const Candidate& cand, int n, const std::vector<LowDimStep>& trajectory) {
  uint32_t switches = 0;
  auto lights = [&](uint32_t x) -> uint32_t {
    if (cand.master >= 0 && !((x >> cand.master) & 1u)) return 0;
    uint32_t acc = 0;
    uint32_t rest = x;
    while (rest) {
      int i = __builtin_ctz(rest);
      rest &= rest - 1;
      acc ^= cand.rows[i];
    }
    return acc;
  };
  for (const LowDimStep& step : trajectory) {
    if (lights(switches) != step.before.bits) return false;
    if (step.action < n) switches ^= 1u << step.action;
    if (lights(switches) != step.after.bits) return false;
  }
  return true;
}

// Enumerate every structure of the family, invoking fn for each candidate.
// fn returns false to stop early.
void enumerate_family(StructureFamily family, int n,
                      const std::function<bool(const Candidate&)>& fn) {
  Candidate cand;
  switch (family) {
    case StructureFamily::OneToOne: {
      std::array<int, 16> perm{};
      std::function<bool(int, uint32_t)> rec = [&](int i, uint32_t used) -> bool {
        if (i == n) {
          for (int k = 0; k < n; ++k) cand.rows[k] = 1u << perm[k];
          return fn(cand);
        }
        for (int j = 0; j < n; ++j) {
          if (used & (1u << j)) continue;
          perm[i] = j;
          if (!rec(i + 1, used | (1u << j))) return false;
        }
        return true;
      };
      rec(0, 0);
      break;
    }
    case StructureFamily::OneToMany: {
      // controller switch per light, odometer over n^n
      std::array<int, 16> ctrl{};
      for (;;) {
        for (int k = 0; k < n; ++k) cand.rows[k] = 0;
        for (int j = 0; j < n; ++j) cand.rows[ctrl[j]] |= 1u << j;
        if (!fn(cand)) return;
        int d = 0;
        while (d < n && ++ctrl[d] == n) ctrl[d++] = 0;
        if (d == n) break;
      }
      break;
    }
    case StructureFamily::ManyToOne: {
      std::array<int, 16> target{};
      for (;;) {
        for (int k = 0; k < n; ++k) cand.rows[k] = 1u << target[k];
        if (!fn(cand)) return;
        int d = 0;
        while (d < n && ++target[d] == n) target[d++] = 0;
        if (d == n) break;
      }
      break;
    }
    case StructureFamily::Masterswitch: {
      for (int m = 0; m < n; ++m) {
        cand.master = m;
        cand.rows[m] = 0;
        std::function<bool(int, uint32_t)> rec = [&](int i, uint32_t used) -> bool {
          if (i == n) return fn(cand);
          if (i == m) return rec(i + 1, used);
          for (int j = 0; j < n; ++j) {
            if (used & (1u << j)) continue;
            cand.rows[i] = 1u << j;
            if (!rec(i + 1, used | (1u << j))) return false;
          }
          return true;
        };
        if (!rec(0, 0)) return;
      }
      break;
    }
  }
}

CausalStructure to_structure(const Candidate& cand, StructureFamily family, int n) {
  CausalStructure s;
  s.n = n;
  s.family = family;
  s.master = cand.master;
  s.adj.assign(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((cand.rows[i] >> j) & 1u) s.adj[static_cast<size_t>(i) * n + j] = 1;
  return s;
}

}  // namespace

CausalStructure analytic_induce(StructureFamily family, int n,
                                const std::vector<LowDimStep>& trajectory) {
  if (n < 2 || n > 7) throw std::invalid_argument("analytic_induce supports n in [2,7]");
  long survivors = 0;
  Candidate winner;
  enumerate_family(family, n, [&](const Candidate& cand) {
    if (consistent(cand, n, trajectory)) {
      if (survivors == 0) winner = cand;
      ++survivors;
    }
    return true;
  });
  if (survivors == 0) {
    throw InconsistentEvidenceError("analytic_induce: no " + std::string(family_name(family)) +
                                    " structure reproduces the trajectory");
  }
  if (survivors > 1) {
    throw AmbiguousEvidenceError("analytic_induce: evidence is ambiguous (" +
                                     std::to_string(survivors) + " survivors)",
                                 survivors);
  }
  return to_structure(winner, family, n);
}

long count_consistent_structures(StructureFamily family, int n,
                                 const std::vector<LowDimStep>& trajectory) {
  if (n < 2 || n > 7) throw std::invalid_argument("count_consistent_structures supports n in [2,7]");
  long survivors = 0;
  enumerate_family(family, n, [&](const Candidate& cand) {
    if (consistent(cand, n, trajectory)) ++survivors;
    return true;
  });
  return survivors;
}

}  // namespace switchlab::causal
