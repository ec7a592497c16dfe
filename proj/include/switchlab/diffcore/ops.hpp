#pragma once

#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

// Standalone differentiable primitives for composite models that wire
// several networks together (residuals, attention heads, outer products).
// Forward functions write into preallocated outputs where it matters for
// inner loops; backward functions accumulate into the given grads.

void softmax(const float* x, float* y, int n);
// dx accumulated from upstream dy given the forward output y.
void softmax_backward(const float* y, const float* dy, float* dx, int n);

void sigmoid(const float* x, float* y, int n);
void sigmoid_backward(const float* y, const float* dy, float* dx, int n);

// out[i*cols + j] += a[i] * b[j]
void add_outer_product(float* out, const float* a, const float* b, int rows, int cols);

// y = M * x  (M rows x cols, y size rows)
void matvec(const float* m, const float* x, float* y, int rows, int cols);
// Accumulates dM += dy ⊗ x and dx += Mᵀ dy.
void matvec_backward(const float* m, const float* x, const float* dy, float* dm, float* dx,
                     int rows, int cols);

}  // namespace switchlab::diff
