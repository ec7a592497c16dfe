#include "switchlab/diffcore/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace switchlab::diff {

namespace {

constexpr char kMagic[4] = {'C', 'K', 'P', '1'};

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& buf, std::string file) : buf_(buf), file_(std::move(file)) {}

  uint8_t u8() { return static_cast<uint8_t>(take(1)[0]); }
  uint16_t u16() {
    const char* p = take(2);
    return static_cast<uint16_t>(static_cast<uint8_t>(p[0]) |
                                 (static_cast<uint16_t>(static_cast<uint8_t>(p[1])) << 8));
  }
  uint32_t u32() {
    const char* p = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(p[i])) << (8 * i);
    return v;
  }
  std::string bytes(size_t n) { return std::string(take(n), n); }
  void floats(float* dst, size_t count) {
    const char* p = take(count * 4);
    std::memcpy(dst, p, count * 4);
  }
  size_t remaining() const { return buf_.size() - pos_; }

 private:
  const char* take(size_t n) {
    if (pos_ + n > buf_.size()) {
      throw std::runtime_error("checkpoint " + file_ + ": truncated (expected " +
                               std::to_string(n) + " more bytes)");
    }
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  const std::string& buf_;
  std::string file_;
  size_t pos_ = 0;
};

void atomic_write(const std::filesystem::path& path, const std::string& payload) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const NamedTensors& tensors) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, static_cast<uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    if (name.size() > 0xffff) throw std::invalid_argument("tensor name too long: " + name);
    if (tensor->shape.size() > 0xff) throw std::invalid_argument("tensor rank too large: " + name);
    put_u16(out, static_cast<uint16_t>(name.size()));
    out.append(name);
    out.push_back(static_cast<char>(tensor->shape.size()));
    for (int d : tensor->shape) put_u32(out, static_cast<uint32_t>(d));
    size_t bytes = tensor->data.size() * 4;
    size_t at = out.size();
    out.resize(at + bytes);
    std::memcpy(out.data() + at, tensor->data.data(), bytes);
  }
  atomic_write(path, out);
}

std::map<std::string, Tensor> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  Reader r(buf, path.string());
  std::string magic = r.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw std::runtime_error("checkpoint " + path.string() + ": bad magic (expected CKP1)");
  }
  uint32_t count = r.u32();
  std::map<std::string, Tensor> out;
  for (uint32_t i = 0; i < count; ++i) {
    uint16_t name_len = r.u16();
    std::string name = r.bytes(name_len);
    uint8_t ndim = r.u8();
    Shape shape(ndim);
    for (int d = 0; d < ndim; ++d) shape[d] = static_cast<int>(r.u32());
    Tensor t(shape);
    r.floats(t.data.data(), static_cast<size_t>(t.numel()));
    if (!out.emplace(std::move(name), std::move(t)).second) {
      throw std::runtime_error("checkpoint " + path.string() + ": duplicate tensor name");
    }
  }
  if (r.remaining() != 0) {
    throw std::runtime_error("checkpoint " + path.string() + ": " +
                             std::to_string(r.remaining()) + " trailing bytes");
  }
  return out;
}

void restore_params(const std::map<std::string, Tensor>& loaded,
                    const std::vector<Parameter*>& params) {
  for (Parameter* p : params) {
    auto it = loaded.find(p->name);
    if (it == loaded.end()) {
      throw std::runtime_error("checkpoint is missing tensor '" + p->name + "'");
    }
    if (it->second.shape != p->value.shape) {
      throw std::runtime_error("checkpoint tensor '" + p->name + "' has shape " +
                               shape_str(it->second.shape) + ", expected " +
                               shape_str(p->value.shape));
    }
    p->value = it->second;
  }
}

NamedTensors collect_params(const std::vector<Parameter*>& params) {
  NamedTensors out;
  out.reserve(params.size());
  for (const Parameter* p : params) out.emplace_back(p->name, &p->value);
  return out;
}

}  // namespace switchlab::diff
