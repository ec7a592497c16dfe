#pragma once

#include <filesystem>

#include "switchlab/causal/structure.hpp"

namespace switchlab::causal {

// Train/test structure sets for one experiment, persisted as a JSON document
// with canonical field order: {version, n, family, structures:[{id,
// adjacency, master, split}]}. Ids are dense from 0, train first.
struct StructureManifest {
  int n = 0;
  StructureFamily family = StructureFamily::OneToOne;
  std::vector<CausalStructure> train;
  std::vector<CausalStructure> test;

  const CausalStructure& by_id(int id) const;
  int total() const { return static_cast<int>(train.size() + test.size()); }
};

void save_manifest(const std::filesystem::path& path, const StructureManifest& manifest);

// Validates version, shapes, id density, family invariants, and train/test
// disjointness.
StructureManifest load_manifest(const std::filesystem::path& path);

}  // namespace switchlab::causal
