#pragma once

#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

// Mean squared difference over all elements.
float l2_loss(const Tensor& pred, const Tensor& target);
// Also accumulates d(loss)/d(pred) into grad (same shape as pred).
float l2_loss_grad(const Tensor& pred, const Tensor& target, Tensor& grad);

// -log softmax(logits)[target_class], numerically stable.
float cross_entropy(const Tensor& logits, int target_class);
float cross_entropy_grad(const Tensor& logits, int target_class, Tensor& grad);

}  // namespace switchlab::diff
