#include "switchlab/diffcore/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace switchlab::diff {

namespace {
void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape != b.shape) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + shape_str(a.shape) +
                                " vs " + shape_str(b.shape));
  }
}
}  // namespace

float l2_loss(const Tensor& pred, const Tensor& target) {
  require_same_shape(pred, target, "l2_loss");
  double acc = 0.0;
  for (long i = 0; i < pred.numel(); ++i) {
    double d = static_cast<double>(pred.data[i]) - static_cast<double>(target.data[i]);
    acc += d * d;
  }
  return static_cast<float>(acc / static_cast<double>(pred.numel()));
}

float l2_loss_grad(const Tensor& pred, const Tensor& target, Tensor& grad) {
  require_same_shape(pred, target, "l2_loss");
  require_same_shape(pred, grad, "l2_loss grad");
  double acc = 0.0;
  float scale = 2.0f / static_cast<float>(pred.numel());
  for (long i = 0; i < pred.numel(); ++i) {
    float d = pred.data[i] - target.data[i];
    acc += static_cast<double>(d) * d;
    grad.data[i] += scale * d;
  }
  return static_cast<float>(acc / static_cast<double>(pred.numel()));
}

namespace {
double log_sum_exp(const Tensor& logits) {
  float mx = logits.data[0];
  for (long i = 1; i < logits.numel(); ++i) mx = std::max(mx, logits.data[i]);
  double s = 0.0;
  for (long i = 0; i < logits.numel(); ++i) s += std::exp(static_cast<double>(logits.data[i] - mx));
  return static_cast<double>(mx) + std::log(s);
}

void require_class(const Tensor& logits, int target_class) {
  if (target_class < 0 || target_class >= logits.numel()) {
    throw std::invalid_argument("cross_entropy: class " + std::to_string(target_class) +
                                " out of range for " + std::to_string(logits.numel()) + " logits");
  }
}
}  // namespace

float cross_entropy(const Tensor& logits, int target_class) {
  require_class(logits, target_class);
  return static_cast<float>(log_sum_exp(logits) - static_cast<double>(logits.data[target_class]));
}

float cross_entropy_grad(const Tensor& logits, int target_class, Tensor& grad) {
  require_class(logits, target_class);
  require_same_shape(logits, grad, "cross_entropy grad");
  double lse = log_sum_exp(logits);
  for (long i = 0; i < logits.numel(); ++i) {
    double p = std::exp(static_cast<double>(logits.data[i]) - lse);
    grad.data[i] += static_cast<float>(p) - (i == target_class ? 1.0f : 0.0f);
  }
  return static_cast<float>(lse - static_cast<double>(logits.data[target_class]));
}

}  // namespace switchlab::diff
