#pragma once

#include <array>
#include <filesystem>

#include "switchlab/causal/structure.hpp"
#include "switchlab/diffcore/rng.hpp"
#include "switchlab/diffcore/tensor.hpp"
#include "switchlab/world/floorplan.hpp"

namespace switchlab::world {

// 32x32 RGB, row-major, 8 bits per channel.
struct Observation {
  std::array<uint8_t, kPixels * 3> rgb{};

  bool operator==(const Observation&) const = default;

  // float tensor in [0,1], shape {32, 32, 3}
  diff::Tensor to_tensor() const;
};

// pixel = ambient + sum of active light contributions, clamped to [0,1] and
// quantized; walls render as fixed dark pixels. With `noise_rng`, Gaussian
// noise (sigma 0.01) is added per channel before quantization.
Observation render(const Floorplan& plan, causal::LightState lights,
                   diff::Rng* noise_rng = nullptr);

// Binary PPM (P6, 32x32, maxval 255); written atomically.
void write_ppm(const std::filesystem::path& path, const Observation& obs);
Observation read_ppm(const std::filesystem::path& path);

}  // namespace switchlab::world
