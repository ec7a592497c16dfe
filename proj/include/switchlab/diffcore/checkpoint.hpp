#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

// Binary named-tensor checkpoint, shared by every model in the project.
// Layout (little-endian): magic "CKP1", u32 tensor count, then per tensor
// u16 name length, name bytes, u8 ndim, u32 dims[ndim], float32 data.
// Writes are atomic (temp file + rename). Loading verifies the magic and
// that the payload length matches exactly.

using NamedTensors = std::vector<std::pair<std::string, const Tensor*>>;

void save_checkpoint(const std::filesystem::path& path, const NamedTensors& tensors);

std::map<std::string, Tensor> load_checkpoint(const std::filesystem::path& path);

// Copies loaded tensors into parameters by name; throws if a name is missing
// or a shape differs.
void restore_params(const std::map<std::string, Tensor>& loaded,
                    const std::vector<Parameter*>& params);

NamedTensors collect_params(const std::vector<Parameter*>& params);

}  // namespace switchlab::diff
