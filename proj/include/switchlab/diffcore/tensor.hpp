#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace switchlab::diff {

using Shape = std::vector<int>;

long shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major float32 tensor.
struct Tensor {
  Shape shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(Shape s) : shape(std::move(s)), data(shape_numel(shape), 0.0f) {}
  Tensor(Shape s, std::vector<float> values);

  static Tensor zeros(Shape s) { return Tensor(std::move(s)); }
  static Tensor full(Shape s, float v);
  static Tensor of(std::initializer_list<float> values);  // 1-D

  long numel() const { return static_cast<long>(data.size()); }
  bool empty() const { return data.empty(); }

  float& operator[](long i) { return data[static_cast<size_t>(i)]; }
  float operator[](long i) const { return data[static_cast<size_t>(i)]; }

  // 2-D accessor; shape must be {rows, cols}.
  float& at(int row, int col) { return data[static_cast<size_t>(row) * shape[1] + col]; }
  float at(int row, int col) const { return data[static_cast<size_t>(row) * shape[1] + col]; }

  float* ptr() { return data.data(); }
  const float* ptr() const { return data.data(); }

  void fill(float v);
  void zero() { fill(0.0f); }
  bool all_finite() const;

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

// Trainable tensor with gradient and Adam state, all shaped like `value`.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor adam_m;
  Tensor adam_v;
  long step_count = 0;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)),
        value(std::move(v)),
        grad(value.shape),
        adam_m(value.shape),
        adam_v(value.shape) {}

  long numel() const { return value.numel(); }
};

}  // namespace switchlab::diff
