#include "switchlab/world/dataset.hpp"

#include <cstring>
#include <fstream>

namespace switchlab::world {

namespace {

constexpr char kMagic[4] = {'C', 'L', 'T', '1'};
constexpr uint8_t kPadByte = 255;

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const char* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(p[i])) << (8 * i);
  return v;
}

}  // namespace

void save_dataset(const std::filesystem::path& path, const TrajectoryDataset& dataset) {
  size_t obs_bytes = static_cast<size_t>(dataset.h_max + 1) * kPixels * 3;
  std::string out;
  out.reserve(16 + dataset.records.size() * (5 + dataset.h_max + obs_bytes));
  out.append(kMagic, 4);
  put_u32(out, static_cast<uint32_t>(dataset.n));
  put_u32(out, static_cast<uint32_t>(dataset.h_max));
  put_u32(out, static_cast<uint32_t>(dataset.records.size()));
  for (const Trajectory& t : dataset.records) {
    if (t.n != dataset.n || t.h_max != dataset.h_max ||
        static_cast<int>(t.actions.size()) != dataset.h_max ||
        static_cast<int>(t.observations.size()) != dataset.h_max + 1) {
      throw std::invalid_argument("save_dataset: trajectory does not match dataset layout");
    }
    put_u32(out, static_cast<uint32_t>(t.structure_id));
    out.push_back(static_cast<char>(t.length));
    for (int k = 0; k < dataset.h_max; ++k) {
      out.push_back(static_cast<char>(k < t.length ? t.actions[k] : kPadByte));
    }
    for (const Observation& obs : t.observations) {
      out.append(reinterpret_cast<const char*>(obs.rgb.data()), obs.rgb.size());
    }
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrajectoryDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open dataset " + path.string());
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw std::runtime_error("dataset " + path.string() + ": bad magic (expected CLT1)");
  }
  TrajectoryDataset ds;
  ds.n = static_cast<int>(get_u32(buf.data() + 4));
  ds.h_max = static_cast<int>(get_u32(buf.data() + 8));
  uint32_t count = get_u32(buf.data() + 12);
  size_t obs_bytes = static_cast<size_t>(ds.h_max + 1) * kPixels * 3;
  size_t record_bytes = 4 + 1 + static_cast<size_t>(ds.h_max) + obs_bytes;
  if (buf.size() != 16 + count * record_bytes) {
    throw std::runtime_error("dataset " + path.string() + ": payload length mismatch");
  }
  ds.records.resize(count);
  const char* p = buf.data() + 16;
  for (uint32_t i = 0; i < count; ++i) {
    Trajectory& t = ds.records[i];
    t.n = ds.n;
    t.h_max = ds.h_max;
    t.structure_id = static_cast<int>(get_u32(p));
    p += 4;
    t.length = static_cast<uint8_t>(*p++);
    if (t.length > ds.h_max) {
      throw std::runtime_error("dataset " + path.string() + ": record length exceeds h_max");
    }
    t.actions.resize(ds.h_max);
    for (int k = 0; k < ds.h_max; ++k) {
      uint8_t a = static_cast<uint8_t>(*p++);
      if (k >= t.length) {
        if (a != kPadByte) {
          throw std::runtime_error("dataset " + path.string() + ": pad slot without pad byte");
        }
        t.actions[k] = static_cast<uint8_t>(ds.n);
      } else {
        if (a > ds.n) {
          throw std::runtime_error("dataset " + path.string() + ": action out of range");
        }
        t.actions[k] = a;
      }
    }
    t.observations.resize(ds.h_max + 1);
    for (Observation& obs : t.observations) {
      std::memcpy(obs.rgb.data(), p, obs.rgb.size());
      p += obs.rgb.size();
    }
  }
  return ds;
}

}  // namespace switchlab::world
