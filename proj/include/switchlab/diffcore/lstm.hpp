#pragma once

#include <string>
#include <vector>

#include "switchlab/diffcore/rng.hpp"
#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

// Standard LSTM cell: gates [i f g o] = W [x; h] + b, c' = f.c + i.g,
// h' = o.tanh(c'). State is explicit so callers control recurrence and
// truncation.
class LstmCell {
 public:
  LstmCell() = default;
  LstmCell(std::string name, int input_dim, int hidden_dim, Rng& init_rng);

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }

  struct State {
    Tensor h;
    Tensor c;
  };
  State initial_state() const;

  struct StepTrace {
    Tensor x;
    Tensor h_prev;
    Tensor c_prev;
    Tensor gates;  // post-activation [i f g o], 4*hidden
    Tensor c_new;
    Tensor tanh_c;
    bool valid = false;
  };

  State step(const Tensor& x, const State& prev, StepTrace* trace = nullptr) const;

  // Backward through one step. dh/dc are gradients w.r.t. the step outputs;
  // gradients w.r.t. inputs are accumulated into dx, dh_prev, dc_prev, and
  // parameter grads into the cell's parameters.
  void backward(const StepTrace& trace, const Tensor& dh, const Tensor& dc, Tensor& dx,
                Tensor& dh_prev, Tensor& dc_prev);

  std::vector<Parameter*> params();
  const Parameter& weight() const { return w_; }
  const Parameter& bias() const { return b_; }

 private:
  int input_dim_ = 0;
  int hidden_dim_ = 0;
  Parameter w_;  // [4*hidden, input+hidden]
  Parameter b_;  // [4*hidden]
};

}  // namespace switchlab::diff
