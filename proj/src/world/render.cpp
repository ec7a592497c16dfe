#include "switchlab/world/render.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace switchlab::world {

diff::Tensor Observation::to_tensor() const {
  diff::Tensor t({kImageSize, kImageSize, 3});
  constexpr float kInv = 1.0f / 255.0f;
  for (size_t i = 0; i < rgb.size(); ++i) t.data[i] = static_cast<float>(rgb[i]) * kInv;
  return t;
}

Observation render(const Floorplan& plan, causal::LightState lights, diff::Rng* noise_rng) {
  Observation obs;
  std::array<float, kPixels * 3> acc;
  for (int p = 0; p < kPixels; ++p) {
    if (plan.walls[p]) {
      acc[p * 3 + 0] = plan.wall_color[0];
      acc[p * 3 + 1] = plan.wall_color[1];
      acc[p * 3 + 2] = plan.wall_color[2];
    } else {
      acc[p * 3 + 0] = plan.ambient[0];
      acc[p * 3 + 1] = plan.ambient[1];
      acc[p * 3 + 2] = plan.ambient[2];
    }
  }
  for (int j = 0; j < plan.n; ++j) {
    if (!lights.get(j)) continue;
    const auto& contrib = plan.contribution[j];
    const auto& color = plan.lights[j].color;
    for (int p = 0; p < kPixels; ++p) {
      float c = contrib[p];
      if (c <= 0.0f) continue;
      acc[p * 3 + 0] += c * color[0];
      acc[p * 3 + 1] += c * color[1];
      acc[p * 3 + 2] += c * color[2];
    }
  }
  for (size_t i = 0; i < acc.size(); ++i) {
    float v = acc[i];
    if (noise_rng) v += 0.01f * noise_rng->gaussian();
    v = std::clamp(v, 0.0f, 1.0f);
    obs.rgb[i] = static_cast<uint8_t>(v * 255.0f + 0.5f);
  }
  return obs;
}

void write_ppm(const std::filesystem::path& path, const Observation& obs) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << "P6\n" << kImageSize << " " << kImageSize << "\n255\n";
    f.write(reinterpret_cast<const char*>(obs.rgb.data()),
            static_cast<std::streamsize>(obs.rgb.size()));
  }
  std::filesystem::rename(tmp, path);
}

Observation read_ppm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  f >> magic >> w >> h >> maxval;
  if (magic != "P6" || w != kImageSize || h != kImageSize || maxval != 255) {
    throw std::runtime_error(path.string() + ": expected P6 32x32 maxval 255");
  }
  f.get();  // single whitespace after header
  Observation obs;
  f.read(reinterpret_cast<char*>(obs.rgb.data()), static_cast<std::streamsize>(obs.rgb.size()));
  if (f.gcount() != static_cast<std::streamsize>(obs.rgb.size())) {
    throw std::runtime_error(path.string() + ": truncated pixel payload");
  }
  return obs;
}

}  // namespace switchlab::world
