#include "switchlab/diffcore/lstm.hpp"

#include <cmath>
#include <stdexcept>

namespace switchlab::diff {

namespace {
float sigm(float x) { return 1.0f / (1.0f + std::exp(-x)); }
}  // namespace

LstmCell::LstmCell(std::string name, int input_dim, int hidden_dim, Rng& init_rng)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  int cols = input_dim + hidden_dim;
  w_ = Parameter(name + "/w", Tensor({4 * hidden_dim, cols}));
  b_ = Parameter(name + "/b", Tensor({4 * hidden_dim}));
  float bound = 1.0f / std::sqrt(static_cast<float>(cols));
  for (auto& v : w_.value.data) v = (init_rng.uniform() * 2.0f - 1.0f) * bound;
}

LstmCell::State LstmCell::initial_state() const {
  return {Tensor({hidden_dim_}), Tensor({hidden_dim_})};
}

LstmCell::State LstmCell::step(const Tensor& x, const State& prev, StepTrace* trace) const {
  if (x.numel() != input_dim_) {
    throw std::invalid_argument("lstm " + w_.name + ": input size " + std::to_string(x.numel()) +
                                " != " + std::to_string(input_dim_));
  }
  if (prev.h.numel() != hidden_dim_ || prev.c.numel() != hidden_dim_) {
    throw std::invalid_argument("lstm " + w_.name + ": uninitialized or mis-sized state");
  }
  int hd = hidden_dim_;
  int cols = input_dim_ + hd;
  Tensor gates({4 * hd});
  for (int r = 0; r < 4 * hd; ++r) {
    const float* row = w_.value.ptr() + static_cast<long>(r) * cols;
    float acc = b_.value.data[r];
    for (int j = 0; j < input_dim_; ++j) acc += row[j] * x.data[j];
    for (int j = 0; j < hd; ++j) acc += row[input_dim_ + j] * prev.h.data[j];
    gates.data[r] = acc;
  }
  // gate order: input, forget, cell candidate, output
  for (int k = 0; k < hd; ++k) {
    gates.data[k] = sigm(gates.data[k]);
    gates.data[hd + k] = sigm(gates.data[hd + k]);
    gates.data[2 * hd + k] = std::tanh(gates.data[2 * hd + k]);
    gates.data[3 * hd + k] = sigm(gates.data[3 * hd + k]);
  }
  State next = initial_state();
  Tensor tanh_c({hd});
  for (int k = 0; k < hd; ++k) {
    next.c.data[k] = gates.data[hd + k] * prev.c.data[k] + gates.data[k] * gates.data[2 * hd + k];
    tanh_c.data[k] = std::tanh(next.c.data[k]);
    next.h.data[k] = gates.data[3 * hd + k] * tanh_c.data[k];
  }
  if (trace) {
    trace->x = x;
    trace->h_prev = prev.h;
    trace->c_prev = prev.c;
    trace->gates = gates;
    trace->c_new = next.c;
    trace->tanh_c = tanh_c;
    trace->valid = true;
  }
  return next;
}

void LstmCell::backward(const StepTrace& trace, const Tensor& dh, const Tensor& dc, Tensor& dx,
                        Tensor& dh_prev, Tensor& dc_prev) {
  if (!trace.valid) {
    throw std::logic_error("lstm " + w_.name + ": backward without a traced step");
  }
  int hd = hidden_dim_;
  int cols = input_dim_ + hd;
  Tensor dgates({4 * hd});
  Tensor dc_total({hd});
  for (int k = 0; k < hd; ++k) {
    float i = trace.gates.data[k];
    float f = trace.gates.data[hd + k];
    float g = trace.gates.data[2 * hd + k];
    float o = trace.gates.data[3 * hd + k];
    float th = trace.tanh_c.data[k];
    float dct = dc.data[k] + dh.data[k] * o * (1.0f - th * th);
    dc_total.data[k] = dct;
    dgates.data[k] = dct * g * i * (1.0f - i);               // input gate (pre-act)
    dgates.data[hd + k] = dct * trace.c_prev.data[k] * f * (1.0f - f);
    dgates.data[2 * hd + k] = dct * i * (1.0f - g * g);      // candidate (tanh)
    dgates.data[3 * hd + k] = dh.data[k] * th * o * (1.0f - o);
    dc_prev.data[k] += dct * f;
  }
  for (int r = 0; r < 4 * hd; ++r) {
    float gr = dgates.data[r];
    b_.grad.data[r] += gr;
    const float* row = w_.value.ptr() + static_cast<long>(r) * cols;
    float* drow = w_.grad.ptr() + static_cast<long>(r) * cols;
    for (int j = 0; j < input_dim_; ++j) {
      drow[j] += gr * trace.x.data[j];
      dx.data[j] += gr * row[j];
    }
    for (int j = 0; j < hd; ++j) {
      drow[input_dim_ + j] += gr * trace.h_prev.data[j];
      dh_prev.data[j] += gr * row[input_dim_ + j];
    }
  }
}

std::vector<Parameter*> LstmCell::params() { return {&w_, &b_}; }

}  // namespace switchlab::diff
