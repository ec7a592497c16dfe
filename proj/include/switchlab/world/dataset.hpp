#pragma once

#include <filesystem>

#include "switchlab/world/trajectory.hpp"

namespace switchlab::world {

// Binary trajectory archive. Layout (little-endian): magic "CLT1", u32 n,
// u32 h_max, u32 record count; per record u32 structure_id, u8 actual
// length, u8 actions[h_max] (255 = pad), u8 rgb[(h_max+1)*32*32*3].
struct TrajectoryDataset {
  int n = 0;
  int h_max = 0;
  std::vector<Trajectory> records;
};

void save_dataset(const std::filesystem::path& path, const TrajectoryDataset& dataset);
TrajectoryDataset load_dataset(const std::filesystem::path& path);

}  // namespace switchlab::world
