#include "switchlab/diffcore/ops.hpp"

#include <cmath>

namespace switchlab::diff {

void softmax(const float* x, float* y, int n) {
  float mx = x[0];
  for (int i = 1; i < n; ++i) mx = std::max(mx, x[i]);
  float sum = 0.0f;
  for (int i = 0; i < n; ++i) {
    y[i] = std::exp(x[i] - mx);
    sum += y[i];
  }
  float inv = 1.0f / sum;
  for (int i = 0; i < n; ++i) y[i] *= inv;
}

void softmax_backward(const float* y, const float* dy, float* dx, int n) {
  float dot = 0.0f;
  for (int i = 0; i < n; ++i) dot += dy[i] * y[i];
  for (int i = 0; i < n; ++i) dx[i] += y[i] * (dy[i] - dot);
}

void sigmoid(const float* x, float* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = 1.0f / (1.0f + std::exp(-x[i]));
}

void sigmoid_backward(const float* y, const float* dy, float* dx, int n) {
  for (int i = 0; i < n; ++i) dx[i] += dy[i] * y[i] * (1.0f - y[i]);
}

void add_outer_product(float* out, const float* a, const float* b, int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    float v = a[i];
    float* row = out + static_cast<long>(i) * cols;
    for (int j = 0; j < cols; ++j) row[j] += v * b[j];
  }
}

void matvec(const float* m, const float* x, float* y, int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    const float* row = m + static_cast<long>(i) * cols;
    float acc = 0.0f;
    for (int j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_backward(const float* m, const float* x, const float* dy, float* dm, float* dx,
                     int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    float g = dy[i];
    const float* row = m + static_cast<long>(i) * cols;
    float* drow = dm + static_cast<long>(i) * cols;
    for (int j = 0; j < cols; ++j) {
      drow[j] += g * x[j];
      dx[j] += g * row[j];
    }
  }
}

}  // namespace switchlab::diff
