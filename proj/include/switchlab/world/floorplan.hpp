#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace switchlab::world {

constexpr int kImageSize = 32;
constexpr int kPixels = kImageSize * kImageSize;

struct LightSpec {
  int cx = 0;
  int cy = 0;
  float radius = 0.0f;
  std::array<float, 3> color{};
};

// Fixed 32x32 layout: three rooms around a horizontal hallway, walls one
// pixel thick. Light placement depends only on n, never on the wiring, so
// every structure of a given size shares pixel geometry. Illumination cones
// ignore walls (additive radial falloff, no occlusion), which is what makes
// neighbouring lights overlap and confound each other.
struct Floorplan {
  int n = 0;
  std::array<uint8_t, kPixels> walls{};  // 1 = wall pixel
  std::vector<LightSpec> lights;
  std::array<float, 3> ambient{};
  std::array<float, 3> wall_color{};

  // contribution of light j at every pixel: max(0, 1 - dist/radius) on floor
  // pixels, 0 on walls. Precomputed once per floorplan.
  std::vector<std::array<float, kPixels>> contribution;

  bool is_wall(int x, int y) const { return walls[static_cast<size_t>(y) * kImageSize + x] != 0; }

  // The standard laboratory floorplan for n lights (2 <= n <= 8).
  static const Floorplan& standard(int n);
};

}  // namespace switchlab::world
