#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "switchlab/causal/analytic.hpp"
#include "switchlab/causal/manifest.hpp"
#include "switchlab/causal/metrics.hpp"
#include "switchlab/causal/structure.hpp"

using namespace switchlab::causal;
using switchlab::diff::Rng;

namespace {

CausalStructure identity_structure(int n) {
  CausalStructure s;
  s.n = n;
  s.family = StructureFamily::OneToOne;
  s.adj.assign(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) s.adj[static_cast<size_t>(i) * n + i] = 1;
  return s;
}

CausalStructure masterswitch_structure(int n, int master, const std::vector<int>& targets) {
  CausalStructure s;
  s.n = n;
  s.family = StructureFamily::Masterswitch;
  s.master = master;
  s.adj.assign(static_cast<size_t>(n) * n, 0);
  int t = 0;
  for (int i = 0; i < n; ++i) {
    if (i == master) continue;
    s.adj[static_cast<size_t>(i) * n + targets[t++]] = 1;
  }
  return s;
}

// Low-dim emulation of the press-each-switch-once interaction.
std::vector<LowDimStep> press_each_once(const CausalStructure& s, const std::vector<int>& order) {
  std::vector<LowDimStep> steps;
  SwitchState x;
  for (int a : order) {
    LowDimStep step;
    step.before = lights_of(s, x);
    step.action = a;
    x = press(x, s.n, a);
    step.after = lights_of(s, x);
    steps.push_back(step);
  }
  return steps;
}

}  // namespace

TEST_CASE("sampled structures satisfy their family invariants") {
  Rng rng(100);
  for (StructureFamily family : kAllFamilies) {
    for (int n : {2, 5, 7}) {
      for (int k = 0; k < 2500; ++k) {
        CausalStructure s = sample_structure(n, family, rng);
        CHECK_NOTHROW(s.validate());
      }
    }
  }
  CHECK_THROWS_AS(sample_structure(1, StructureFamily::OneToOne, rng), std::invalid_argument);
}

TEST_CASE("one_to_one at n=2 only yields identity or swap") {
  Rng rng(101);
  std::set<std::vector<uint8_t>> seen;
  for (int k = 0; k < 200; ++k) {
    seen.insert(sample_structure(2, StructureFamily::OneToOne, rng).adj);
  }
  CHECK(seen == std::set<std::vector<uint8_t>>{{1, 0, 0, 1}, {0, 1, 1, 0}});
}

TEST_CASE("family shape spot checks at n=5") {
  Rng rng(102);
  CausalStructure otm = sample_structure(5, StructureFamily::OneToMany, rng);
  for (int j = 0; j < 5; ++j) {
    int col = 0;
    for (int i = 0; i < 5; ++i) col += otm.edge(i, j);
    CHECK(col == 1);
  }
  CausalStructure ms = sample_structure(5, StructureFamily::Masterswitch, rng);
  CHECK(ms.master >= 0);
  CHECK(ms.row_mask(ms.master) == 0);
  uint32_t used = 0;
  for (int i = 0; i < 5; ++i) {
    if (i == ms.master) continue;
    uint32_t mask = ms.row_mask(i);
    CHECK(__builtin_popcount(mask) == 1);
    CHECK((used & mask) == 0);
    used |= mask;
  }
}

TEST_CASE("lights_of parity semantics") {
  CausalStructure id5 = identity_structure(5);
  CHECK(lights_of(id5, SwitchState{{0b00001}}).bits == 0b00001);
  CHECK(lights_of(id5, SwitchState{{0}}).bits == 0);

  // two switches wired to the same light cancel
  CausalStructure mto;
  mto.n = 5;
  mto.family = StructureFamily::ManyToOne;
  mto.adj.assign(25, 0);
  mto.adj[0 * 5 + 0] = 1;
  mto.adj[1 * 5 + 0] = 1;
  for (int i = 2; i < 5; ++i) mto.adj[static_cast<size_t>(i) * 5 + i] = 1;
  CHECK(lights_of(mto, SwitchState{{0b00011}}).bits == 0);
  CHECK(lights_of(mto, SwitchState{{0b00001}}).bits == 0b00001);

  CausalStructure ms = masterswitch_structure(5, 2, {0, 1, 3, 4});
  CHECK(lights_of(ms, SwitchState{{0b00011}}).bits == 0);  // master off gates all
  CHECK(lights_of(ms, SwitchState{{0b00111}}).bits == 0b00011);
}

TEST_CASE("all-off maps to all-off for every sampled structure") {
  Rng rng(103);
  for (StructureFamily family : kAllFamilies) {
    for (int k = 0; k < 500; ++k) {
      CausalStructure s = sample_structure(5, family, rng);
      CHECK(lights_of(s, SwitchState{}).bits == 0);
    }
  }
}

TEST_CASE("press toggles, no-ops, and validates") {
  SwitchState x;
  x = press(x, 2, 1);
  CHECK(x.bits == 0b10);
  CHECK(press(press(x, 2, 0), 2, 0) == x);
  CHECK(press(x, 2, 2) == x);  // reserved no-op slot
  CHECK_THROWS_AS(press(x, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(press(x, 2, -1), std::invalid_argument);

  SUBCASE("double press restores lights too") {
    Rng rng(104);
    for (StructureFamily family : kAllFamilies) {
      CausalStructure s = sample_structure(5, family, rng);
      SwitchState start{{rng.next_u32() & 0b11111}};
      for (int a = 0; a < 5; ++a) {
        SwitchState twice = press(press(start, 5, a), 5, a);
        CHECK(twice == start);
        CHECK(lights_of(s, twice) == lights_of(s, start));
      }
    }
  }
}

TEST_CASE("reachable light configurations") {
  CHECK(reachable_light_configs(identity_structure(5)).size() == 32);

  // Enumerating all 2^5 switch states of a masterswitch wiring: master off
  // gives all-off, master on gives every subset of the 4 controlled lights,
  // so the all-off state coincides and the image has 2^4 = 16 elements.
  CausalStructure ms = masterswitch_structure(5, 2, {0, 1, 3, 4});
  std::set<uint32_t> image;
  for (uint32_t bits = 0; bits < 32; ++bits) {
    image.insert(lights_of(ms, SwitchState{{bits}}).bits);
  }
  CHECK(image.size() == 16);
  auto reachable = reachable_light_configs(ms);
  CHECK(reachable.size() == image.size());
  for (const LightState& l : reachable) CHECK(image.count(l.bits) == 1);
  for (const LightState& l : reachable) CHECK_FALSE(l.get(2 == ms.master ? 2 : ms.master));

  // degenerate one_to_many: one switch controls everything
  CausalStructure otm;
  otm.n = 5;
  otm.family = StructureFamily::OneToMany;
  otm.adj.assign(25, 0);
  for (int j = 0; j < 5; ++j) otm.adj[0 * 5 + j] = 1;
  auto configs = reachable_light_configs(otm);
  REQUIRE(configs.size() == 2);
  CHECK(configs[0].bits == 0);
  CHECK(configs[1].bits == 0b11111);
}

TEST_CASE("analytic induction recovers the truth by consistency filtering") {
  CausalStructure id5 = identity_structure(5);
  auto steps = press_each_once(id5, {0, 1, 2, 3, 4});
  CausalStructure recovered = analytic_induce(StructureFamily::OneToOne, 5, steps);
  CHECK(recovered == id5);

  SUBCASE("no evidence leaves the whole family as survivors") {
    try {
      analytic_induce(StructureFamily::OneToOne, 5, {});
      FAIL("expected ambiguity");
    } catch (const AmbiguousEvidenceError& e) {
      CHECK(e.survivors == 120);  // 5!
    }
  }

  SUBCASE("contradictory evidence is inconsistent") {
    auto bad = steps;
    bad[0].after.bits = 0b11;  // one press cannot switch two lights in one_to_one
    CHECK_THROWS_AS(analytic_induce(StructureFamily::OneToOne, 5, bad),
                    InconsistentEvidenceError);
  }

  SUBCASE("press-each-once identifies every non-master family") {
    Rng rng(105);
    for (StructureFamily family :
         {StructureFamily::OneToOne, StructureFamily::OneToMany, StructureFamily::ManyToOne}) {
      for (int n : {5, 7}) {
        for (int k = 0; k < 40; ++k) {
          CausalStructure s = sample_structure(n, family, rng);
          std::vector<int> order(n);
          std::iota(order.begin(), order.end(), 0);
          rng.shuffle(order);
          CausalStructure got = analytic_induce(family, n, press_each_once(s, order));
          CHECK(got == s);
        }
      }
    }
  }
}

TEST_CASE("f1 score against hand-built confusion matrices") {
  CausalStructure id5 = identity_structure(5);

  SUBCASE("exact estimate scores 1") {
    auto est = CausalGraphEstimate::from_truth(id5);
    F1Result r = f1_score(est, id5);
    CHECK(r.f1 == 1.0);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
  }

  SUBCASE("one hit one miss one false alarm") {
    CausalStructure truth = identity_structure(2);
    auto est = CausalGraphEstimate::zeros(2, false);
    est.at(0, 0) = 0.9f;
    est.at(0, 1) = 0.9f;
    // TP {(0,0)}, FP {(0,1)}, FN {(1,1)} -> P = R = 0.5
    F1Result r = f1_score(est, truth);
    CHECK(r.precision == doctest::Approx(0.5));
    CHECK(r.recall == doctest::Approx(0.5));
    CHECK(r.f1 == doctest::Approx(0.5));
  }

  SUBCASE("weights at 0.49 predict nothing") {
    auto est = CausalGraphEstimate::zeros(5, false);
    for (auto& w : est.weights) w = 0.49f;
    F1Result r = f1_score(est, id5);
    CHECK(r.f1 == 0.0);
  }

  SUBCASE("masterswitch scores the indicator row too") {
    CausalStructure ms = masterswitch_structure(5, 2, {0, 1, 3, 4});
    auto est = CausalGraphEstimate::from_truth(ms);
    CHECK(f1_score(est, ms).f1 == 1.0);
    est.master_weights[ms.master] = 0.0f;  // drop the master indicator
    F1Result r = f1_score(est, ms);
    CHECK(r.f1 < 1.0);
    CHECK(r.recall == doctest::Approx(4.0 / 5.0));

    auto missing = CausalGraphEstimate::zeros(5, false);
    CHECK_THROWS_AS(f1_score(missing, ms), std::invalid_argument);
  }

  SUBCASE("equivariant under simultaneous relabeling") {
    Rng rng(106);
    for (int trial = 0; trial < 50; ++trial) {
      CausalStructure s = sample_structure(5, StructureFamily::ManyToOne, rng);
      auto est = CausalGraphEstimate::zeros(5, false);
      for (auto& w : est.weights) w = rng.uniform();
      double base = f1_score(est, s).f1;

      std::vector<int> sp(5), lp(5);
      std::iota(sp.begin(), sp.end(), 0);
      std::iota(lp.begin(), lp.end(), 0);
      rng.shuffle(sp);
      rng.shuffle(lp);
      CausalStructure s2 = s;
      auto est2 = est;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
          s2.adj[static_cast<size_t>(sp[i]) * 5 + lp[j]] = s.edge(i, j);
          est2.at(sp[i], lp[j]) = est.at(i, j);
        }
      CHECK(f1_score(est2, s2).f1 == doctest::Approx(base));
    }
  }

  SUBCASE("size mismatch throws") {
    auto est = CausalGraphEstimate::zeros(4, false);
    CHECK_THROWS_AS(f1_score(est, id5), std::invalid_argument);
  }
}

TEST_CASE("split_structures") {
  Rng rng(107);

  SUBCASE("one_to_one n=5 caps the test split at the leftover 20") {
    auto split = split_structures(5, StructureFamily::OneToOne, 100, 100, rng);
    CHECK(split.train.size() == 100);
    CHECK(split.test.size() == 20);  // 5! = 120 structures total
    std::set<std::vector<uint8_t>> seen;
    for (const auto& s : split.train) CHECK(seen.insert(s.adj).second);
    for (const auto& s : split.test) CHECK(seen.insert(s.adj).second);
  }

  SUBCASE("small request stays disjoint and distinct") {
    auto split = split_structures(5, StructureFamily::Masterswitch, 10, 5, rng);
    CHECK(split.train.size() == 10);
    CHECK(split.test.size() == 5);
    std::set<std::pair<std::vector<uint8_t>, int>> seen;
    for (const auto& s : split.train) {
      s.validate();
      CHECK(seen.insert({s.adj, s.master}).second);
    }
    for (const auto& s : split.test) {
      s.validate();
      CHECK(seen.insert({s.adj, s.master}).second);
    }
  }

  SUBCASE("exhausted family reports its cardinality") {
    CHECK_THROWS_WITH_AS(split_structures(2, StructureFamily::OneToOne, 2, 1, rng),
                         doctest::Contains("only 2 structures"), std::invalid_argument);
  }

  SUBCASE("cardinalities") {
    CHECK(family_cardinality(5, StructureFamily::OneToOne) == 120);
    CHECK(family_cardinality(5, StructureFamily::OneToMany) == 3125);
    CHECK(family_cardinality(5, StructureFamily::ManyToOne) == 3125);
    CHECK(family_cardinality(5, StructureFamily::Masterswitch) == 600);
    CHECK(family_cardinality(7, StructureFamily::ManyToOne) == 823543);
  }
}

TEST_CASE("manifest roundtrip and validation") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "switchlab_manifest_test";
  fs::create_directories(dir);
  fs::path file = dir / "structures.json";

  Rng rng(108);
  StructureManifest m;
  m.n = 5;
  m.family = StructureFamily::Masterswitch;
  auto split = split_structures(5, StructureFamily::Masterswitch, 6, 3, rng);
  m.train = split.train;
  m.test = split.test;

  save_manifest(file, m);
  StructureManifest loaded = load_manifest(file);
  CHECK(loaded.n == m.n);
  CHECK(loaded.family == m.family);
  CHECK(loaded.train == m.train);
  CHECK(loaded.test == m.test);
  CHECK(loaded.by_id(0) == m.train[0]);
  CHECK(loaded.by_id(6) == m.test[0]);

  SUBCASE("duplicate across splits is rejected") {
    StructureManifest bad = m;
    bad.test[0] = bad.train[0];
    fs::path bad_file = dir / "bad.json";
    save_manifest(bad_file, bad);
    CHECK_THROWS_WITH_AS(load_manifest(bad_file), doctest::Contains("disjoint"),
                         std::runtime_error);
  }

  SUBCASE("version is enforced") {
    fs::path v_file = dir / "v2.json";
    std::ofstream f(v_file);
    f << R"({"version": 2, "n": 5, "family": "one_to_one", "structures": []})";
    f.close();
    CHECK_THROWS_WITH_AS(load_manifest(v_file), doctest::Contains("version"), std::runtime_error);
  }

  fs::remove_all(dir);
}
