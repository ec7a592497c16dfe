#pragma once

#include <string>
#include <vector>

#include "switchlab/diffcore/rng.hpp"
#include "switchlab/diffcore/tensor.hpp"

namespace switchlab::diff {

enum class Mode { Train, Eval };

// One layer of a sequential network. Convolutions are stride 1 with zero
// padding 1, pooling is 2x2 stride 2. Image tensors are HxWxC row-major,
// temporal tensors are TxC.
struct LayerSpec {
  enum class Kind {
    Conv3x3,
    Conv1dK3,
    MaxPool2x2,
    FullyConnected,
    Relu,
    Sigmoid,
    Softmax,
    Dropout,
    LstmCell,
  };

  Kind kind = Kind::Relu;
  int in_channels = 0;
  int out_channels = 0;
  int in_dim = 0;
  int out_dim = 0;
  float rate = 0.0f;
  int hidden = 0;

  static LayerSpec conv3x3(int in_c, int out_c);
  static LayerSpec conv1d_k3(int in_c, int out_c);
  static LayerSpec maxpool2x2();
  static LayerSpec fully_connected(int in, int out);
  static LayerSpec relu();
  static LayerSpec sigmoid();
  static LayerSpec softmax();
  static LayerSpec dropout(float rate);
  static LayerSpec lstm_cell(int hidden);

  const char* kind_name() const;
};

// Per-forward-call records needed by backward. Traces are reusable; a
// network may be applied several times before backward as long as each call
// site keeps its own trace.
struct Trace {
  struct LayerTrace {
    Tensor output;
    Tensor mask;              // dropout only (scaled inverted mask)
    std::vector<int> argmax;  // maxpool only
  };
  Tensor input;
  std::vector<LayerTrace> layers;
  bool valid = false;
};

// Sequential feed-forward network over the layer kinds above. Recurrent
// cells do not compose sequentially; LayerSpec::lstm_cell is rejected here
// and served by LstmCell instead.
class Network {
 public:
  Network() = default;
  Network(std::string name, Shape input_shape, std::vector<LayerSpec> specs, Rng& init_rng);

  const std::string& name() const { return name_; }
  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const;

  // Forward one sample. `rng` is required when a dropout layer runs in
  // train mode. If `trace` is given it records everything backward needs.
  Tensor forward(const Tensor& input, Mode mode, Rng* rng = nullptr, Trace* trace = nullptr) const;

  // Accumulates parameter gradients from a traced forward call and returns
  // the gradient with respect to the network input. `need_input_grad=false`
  // skips that (useful when the input is raw data).
  Tensor backward(const Trace& trace, const Tensor& output_grad, bool need_input_grad = true);

  std::vector<Parameter*> params();
  long param_count() const;

  // Read-only view for oracles and serialization helpers.
  struct LayerInfo {
    const LayerSpec* spec;
    const Shape* in_shape;
    const Shape* out_shape;
    const Parameter* w;
    const Parameter* b;
  };
  std::vector<LayerInfo> layers_info() const;

 private:
  struct Layer {
    LayerSpec spec;
    Shape in_shape;
    Shape out_shape;
    Parameter w;
    Parameter b;
  };

  std::string name_;
  Shape input_shape_;
  std::vector<Layer> layers_;
};

}  // namespace switchlab::diff
