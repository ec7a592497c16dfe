#include "switchlab/world/floorplan.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace switchlab::world {

namespace {

// Light slots shared by all sizes; the first n entries are used. Consecutive
// slots are placed so their falloff discs overlap, keeping every light
// confounded with at least one neighbour at any n >= 2.
constexpr LightSpec kLightTable[] = {
    {7, 6, 7.5f, {0.75f, 0.65f, 0.45f}},    // top-left room, warm
    {12, 10, 7.0f, {0.35f, 0.55f, 0.80f}},  // top-left room, blue
    {22, 5, 7.5f, {0.40f, 0.75f, 0.40f}},   // top-right room, green
    {16, 15, 8.0f, {0.80f, 0.55f, 0.30f}},  // hallway, amber
    {9, 24, 8.0f, {0.70f, 0.40f, 0.70f}},   // bottom room, magenta
    {27, 11, 7.0f, {0.80f, 0.35f, 0.30f}},  // top-right room, red
    {23, 25, 8.0f, {0.35f, 0.70f, 0.75f}},  // bottom room, cyan
    {4, 16, 6.5f, {0.55f, 0.45f, 0.75f}},   // hallway west, lilac
};

Floorplan build(int n) {
  if (n < 2 || n > 8) {
    throw std::invalid_argument("floorplan supports 2..8 lights, got " + std::to_string(n));
  }
  Floorplan plan;
  plan.n = n;
  plan.ambient = {0.10f, 0.10f, 0.11f};
  plan.wall_color = {0.04f, 0.04f, 0.05f};

  auto wall = [&](int x, int y) { plan.walls[static_cast<size_t>(y) * kImageSize + x] = 1; };
  for (int i = 0; i < kImageSize; ++i) {
    wall(i, 0);
    wall(i, kImageSize - 1);
    wall(0, i);
    wall(kImageSize - 1, i);
  }
  // hallway between rows 14..17; door gaps into the three rooms
  for (int x = 1; x < kImageSize - 1; ++x) {
    if (x != 5 && x != 6 && x != 25 && x != 26) wall(x, 13);
    if (x != 15 && x != 16) wall(x, 18);
  }
  // vertical wall splitting the upper area into two rooms
  for (int y = 1; y <= 12; ++y) wall(15, y);

  plan.lights.assign(kLightTable, kLightTable + n);
  for (const LightSpec& light : plan.lights) {
    if (plan.is_wall(light.cx, light.cy)) {
      throw std::logic_error("light placed on a wall pixel");
    }
  }

  plan.contribution.resize(n);
  for (int j = 0; j < n; ++j) {
    const LightSpec& light = plan.lights[j];
    for (int y = 0; y < kImageSize; ++y) {
      for (int x = 0; x < kImageSize; ++x) {
        size_t p = static_cast<size_t>(y) * kImageSize + x;
        if (plan.walls[p]) {
          plan.contribution[j][p] = 0.0f;
          continue;
        }
        float dx = static_cast<float>(x - light.cx);
        float dy = static_cast<float>(y - light.cy);
        float dist = std::sqrt(dx * dx + dy * dy);
        plan.contribution[j][p] = std::max(0.0f, 1.0f - dist / light.radius);
      }
    }
  }
  return plan;
}

}  // namespace

const Floorplan& Floorplan::standard(int n) {
  static std::map<int, Floorplan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

}  // namespace switchlab::world
