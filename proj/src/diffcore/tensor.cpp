#include "switchlab/diffcore/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace switchlab::diff {

long shape_numel(const Shape& shape) {
  long n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative dimension in shape " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ')';
  return os.str();
}

Tensor::Tensor(Shape s, std::vector<float> values) : shape(std::move(s)), data(std::move(values)) {
  if (static_cast<long>(data.size()) != shape_numel(shape)) {
    throw std::invalid_argument("tensor data length " + std::to_string(data.size()) +
                                " does not match shape " + shape_str(shape));
  }
}

Tensor Tensor::full(Shape s, float v) {
  Tensor t(std::move(s));
  t.fill(v);
  return t;
}

Tensor Tensor::of(std::initializer_list<float> values) {
  Tensor t;
  t.shape = {static_cast<int>(values.size())};
  t.data.assign(values);
  return t;
}

void Tensor::fill(float v) {
  for (auto& x : data) x = v;
}

bool Tensor::all_finite() const {
  for (float x : data) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace switchlab::diff
