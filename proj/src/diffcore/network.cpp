#include "switchlab/diffcore/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "switchlab/diffcore/ops.hpp"

namespace switchlab::diff {

LayerSpec LayerSpec::conv3x3(int in_c, int out_c) {
  LayerSpec s;
  s.kind = Kind::Conv3x3;
  s.in_channels = in_c;
  s.out_channels = out_c;
  return s;
}

LayerSpec LayerSpec::conv1d_k3(int in_c, int out_c) {
  LayerSpec s;
  s.kind = Kind::Conv1dK3;
  s.in_channels = in_c;
  s.out_channels = out_c;
  return s;
}

LayerSpec LayerSpec::maxpool2x2() {
  LayerSpec s;
  s.kind = Kind::MaxPool2x2;
  return s;
}

LayerSpec LayerSpec::fully_connected(int in, int out) {
  LayerSpec s;
  s.kind = Kind::FullyConnected;
  s.in_dim = in;
  s.out_dim = out;
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = Kind::Relu;
  return s;
}

LayerSpec LayerSpec::sigmoid() {
  LayerSpec s;
  s.kind = Kind::Sigmoid;
  return s;
}

LayerSpec LayerSpec::softmax() {
  LayerSpec s;
  s.kind = Kind::Softmax;
  return s;
}

LayerSpec LayerSpec::dropout(float rate) {
  LayerSpec s;
  s.kind = Kind::Dropout;
  s.rate = rate;
  return s;
}

LayerSpec LayerSpec::lstm_cell(int hidden) {
  LayerSpec s;
  s.kind = Kind::LstmCell;
  s.hidden = hidden;
  return s;
}

const char* LayerSpec::kind_name() const {
  switch (kind) {
    case Kind::Conv3x3: return "conv3x3";
    case Kind::Conv1dK3: return "conv1d_k3";
    case Kind::MaxPool2x2: return "maxpool2x2";
    case Kind::FullyConnected: return "fullyconnected";
    case Kind::Relu: return "relu";
    case Kind::Sigmoid: return "sigmoid";
    case Kind::Softmax: return "softmax";
    case Kind::Dropout: return "dropout";
    case Kind::LstmCell: return "lstmcell";
  }
  return "?";
}

namespace {

std::string layer_id(const std::string& net, size_t idx, const LayerSpec& spec) {
  return net + "/" + std::to_string(idx) + ":" + spec.kind_name();
}

[[noreturn]] void config_error(const std::string& id, const std::string& what) {
  throw std::invalid_argument("network configuration error at " + id + ": " + what);
}

void init_uniform(Tensor& t, int fan_in, Rng& rng) {
  float bound = 1.0f / std::sqrt(static_cast<float>(fan_in));
  for (auto& v : t.data) v = (rng.uniform() * 2.0f - 1.0f) * bound;
}

// ---- conv3x3, stride 1, zero padding 1, HWC layout --------------------

void conv3x3_forward(const float* in, const float* w, const float* b, float* out, int h, int wd,
                     int cin, int cout) {
  for (int y = 0; y < h; ++y) {
    bool y_interior = y > 0 && y < h - 1;
    for (int x = 0; x < wd; ++x) {
      float* o = out + (static_cast<long>(y) * wd + x) * cout;
      for (int oc = 0; oc < cout; ++oc) o[oc] = b[oc];
      if (y_interior && x > 0 && x < wd - 1) {
        // Interior pixels hit all nine taps; skip the bounds checks.
        const float* base = in + (static_cast<long>(y - 1) * wd + (x - 1)) * cin;
        const float* wk = w;
        for (int dy = 0; dy < 3; ++dy) {
          const float* px = base + static_cast<long>(dy) * wd * cin;
          for (int k = 0; k < 3 * cin; ++k) {
            float v = px[k];
            const float* wrow = wk + static_cast<long>(k) * cout;
            for (int oc = 0; oc < cout; ++oc) o[oc] += v * wrow[oc];
          }
          wk += 3 * cin * cout;
        }
        continue;
      }
      for (int dy = -1; dy <= 1; ++dy) {
        int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          int xx = x + dx;
          if (xx < 0 || xx >= wd) continue;
          const float* px = in + (static_cast<long>(yy) * wd + xx) * cin;
          const float* wk = w + ((dy + 1) * 3 + (dx + 1)) * cin * cout;
          for (int ic = 0; ic < cin; ++ic) {
            float v = px[ic];
            const float* wrow = wk + ic * cout;
            for (int oc = 0; oc < cout; ++oc) o[oc] += v * wrow[oc];
          }
        }
      }
    }
  }
}

void conv3x3_backward(const float* in, const float* w, const float* dout, float* dw, float* db,
                      float* din, int h, int wd, int cin, int cout) {
  for (int y = 0; y < h; ++y) {
    bool y_interior = y > 0 && y < h - 1;
    for (int x = 0; x < wd; ++x) {
      const float* go = dout + (static_cast<long>(y) * wd + x) * cout;
      for (int oc = 0; oc < cout; ++oc) db[oc] += go[oc];
      if (y_interior && x > 0 && x < wd - 1) {
        long base = (static_cast<long>(y - 1) * wd + (x - 1)) * cin;
        for (int dy = 0; dy < 3; ++dy) {
          long row = base + static_cast<long>(dy) * wd * cin;
          const float* px = in + row;
          float* dwk = dw + static_cast<long>(dy) * 3 * cin * cout;
          for (int k = 0; k < 3 * cin; ++k) {
            float v = px[k];
            float* dwrow = dwk + static_cast<long>(k) * cout;
            for (int oc = 0; oc < cout; ++oc) dwrow[oc] += v * go[oc];
          }
          if (din) {
            const float* wk = w + static_cast<long>(dy) * 3 * cin * cout;
            float* dpx = din + row;
            for (int k = 0; k < 3 * cin; ++k) {
              const float* wrow = wk + static_cast<long>(k) * cout;
              float acc = 0.0f;
              for (int oc = 0; oc < cout; ++oc) acc += wrow[oc] * go[oc];
              dpx[k] += acc;
            }
          }
        }
        continue;
      }
      for (int dy = -1; dy <= 1; ++dy) {
        int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          int xx = x + dx;
          if (xx < 0 || xx >= wd) continue;
          long pix = (static_cast<long>(yy) * wd + xx) * cin;
          const float* px = in + pix;
          int k = (dy + 1) * 3 + (dx + 1);
          float* dwk = dw + k * cin * cout;
          for (int ic = 0; ic < cin; ++ic) {
            float v = px[ic];
            float* dwrow = dwk + ic * cout;
            for (int oc = 0; oc < cout; ++oc) dwrow[oc] += v * go[oc];
          }
          if (din) {
            const float* wk = w + k * cin * cout;
            float* dpx = din + pix;
            for (int ic = 0; ic < cin; ++ic) {
              const float* wrow = wk + ic * cout;
              float acc = 0.0f;
              for (int oc = 0; oc < cout; ++oc) acc += wrow[oc] * go[oc];
              dpx[ic] += acc;
            }
          }
        }
      }
    }
  }
}

// ---- conv over time, kernel 3, stride 1, zero padding 1, TxC layout ----

void conv1d_forward(const float* in, const float* w, const float* b, float* out, int t, int cin,
                    int cout) {
  for (int i = 0; i < t; ++i) {
    float* o = out + static_cast<long>(i) * cout;
    for (int oc = 0; oc < cout; ++oc) o[oc] = b[oc];
    for (int dt = -1; dt <= 1; ++dt) {
      int ii = i + dt;
      if (ii < 0 || ii >= t) continue;
      const float* col = in + static_cast<long>(ii) * cin;
      const float* wk = w + (dt + 1) * cin * cout;
      for (int ic = 0; ic < cin; ++ic) {
        float v = col[ic];
        const float* wrow = wk + ic * cout;
        for (int oc = 0; oc < cout; ++oc) o[oc] += v * wrow[oc];
      }
    }
  }
}

void conv1d_backward(const float* in, const float* w, const float* dout, float* dw, float* db,
                     float* din, int t, int cin, int cout) {
  for (int i = 0; i < t; ++i) {
    const float* go = dout + static_cast<long>(i) * cout;
    for (int oc = 0; oc < cout; ++oc) db[oc] += go[oc];
    for (int dt = -1; dt <= 1; ++dt) {
      int ii = i + dt;
      if (ii < 0 || ii >= t) continue;
      long col = static_cast<long>(ii) * cin;
      const float* px = in + col;
      float* dwk = dw + (dt + 1) * cin * cout;
      for (int ic = 0; ic < cin; ++ic) {
        float v = px[ic];
        float* dwrow = dwk + ic * cout;
        for (int oc = 0; oc < cout; ++oc) dwrow[oc] += v * go[oc];
      }
      if (din) {
        const float* wk = w + (dt + 1) * cin * cout;
        float* dpx = din + col;
        for (int ic = 0; ic < cin; ++ic) {
          const float* wrow = wk + ic * cout;
          float acc = 0.0f;
          for (int oc = 0; oc < cout; ++oc) acc += wrow[oc] * go[oc];
          dpx[ic] += acc;
        }
      }
    }
  }
}

}  // namespace

Network::Network(std::string name, Shape input_shape, std::vector<LayerSpec> specs, Rng& init_rng)
    : name_(std::move(name)), input_shape_(std::move(input_shape)) {
  Shape cur = input_shape_;
  layers_.reserve(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    const LayerSpec& spec = specs[i];
    std::string id = layer_id(name_, i, spec);
    Layer layer;
    layer.spec = spec;
    layer.in_shape = cur;
    switch (spec.kind) {
      case LayerSpec::Kind::Conv3x3: {
        if (cur.size() != 3) config_error(id, "expects HxWxC input, got " + shape_str(cur));
        if (cur[2] != spec.in_channels) {
          config_error(id, "declared " + std::to_string(spec.in_channels) + " input channels, got " +
                               std::to_string(cur[2]));
        }
        layer.out_shape = {cur[0], cur[1], spec.out_channels};
        layer.w = Parameter(id + "/w", Tensor({3, 3, spec.in_channels, spec.out_channels}));
        layer.b = Parameter(id + "/b", Tensor({spec.out_channels}));
        init_uniform(layer.w.value, 9 * spec.in_channels, init_rng);
        break;
      }
      case LayerSpec::Kind::Conv1dK3: {
        if (cur.size() != 2) config_error(id, "expects TxC input, got " + shape_str(cur));
        if (cur[1] != spec.in_channels) {
          config_error(id, "declared " + std::to_string(spec.in_channels) + " input channels, got " +
                               std::to_string(cur[1]));
        }
        layer.out_shape = {cur[0], spec.out_channels};
        layer.w = Parameter(id + "/w", Tensor({3, spec.in_channels, spec.out_channels}));
        layer.b = Parameter(id + "/b", Tensor({spec.out_channels}));
        init_uniform(layer.w.value, 3 * spec.in_channels, init_rng);
        break;
      }
      case LayerSpec::Kind::MaxPool2x2: {
        if (cur.size() != 3) config_error(id, "expects HxWxC input, got " + shape_str(cur));
        if (cur[0] % 2 != 0 || cur[1] % 2 != 0) {
          config_error(id, "input " + shape_str(cur) + " is not divisible by 2x2");
        }
        layer.out_shape = {cur[0] / 2, cur[1] / 2, cur[2]};
        break;
      }
      case LayerSpec::Kind::FullyConnected: {
        long flat = shape_numel(cur);
        if (flat != spec.in_dim) {
          config_error(id, "declared input dim " + std::to_string(spec.in_dim) + ", got " +
                               shape_str(cur) + " = " + std::to_string(flat));
        }
        layer.out_shape = {spec.out_dim};
        layer.w = Parameter(id + "/w", Tensor({spec.out_dim, spec.in_dim}));
        layer.b = Parameter(id + "/b", Tensor({spec.out_dim}));
        init_uniform(layer.w.value, spec.in_dim, init_rng);
        break;
      }
      case LayerSpec::Kind::Relu:
      case LayerSpec::Kind::Sigmoid:
      case LayerSpec::Kind::Softmax:
        layer.out_shape = cur;
        break;
      case LayerSpec::Kind::Dropout: {
        if (spec.rate < 0.0f || spec.rate >= 1.0f) {
          config_error(id, "dropout rate must be in [0,1)");
        }
        layer.out_shape = cur;
        break;
      }
      case LayerSpec::Kind::LstmCell:
        config_error(id, "recurrent cells do not compose sequentially; use LstmCell");
    }
    cur = layer.out_shape;
    layers_.push_back(std::move(layer));
  }
  if (layers_.empty()) {
    throw std::invalid_argument("network " + name_ + " has no layers");
  }
}

const Shape& Network::output_shape() const { return layers_.back().out_shape; }

Tensor Network::forward(const Tensor& input, Mode mode, Rng* rng, Trace* trace) const {
  if (input.shape != input_shape_) {
    throw std::invalid_argument("network " + name_ + ": input shape " + shape_str(input.shape) +
                                " does not match declared " + shape_str(input_shape_));
  }
  if (trace) {
    trace->input = input;
    trace->layers.resize(layers_.size());
    trace->valid = false;
  }

  Tensor cur = input;
  for (size_t i = 0; i < layers_.size(); ++i) {
    const Layer& layer = layers_[i];
    Tensor out(layer.out_shape);
    switch (layer.spec.kind) {
      case LayerSpec::Kind::Conv3x3:
        conv3x3_forward(cur.ptr(), layer.w.value.ptr(), layer.b.value.ptr(), out.ptr(),
                        layer.in_shape[0], layer.in_shape[1], layer.in_shape[2],
                        layer.spec.out_channels);
        break;
      case LayerSpec::Kind::Conv1dK3:
        conv1d_forward(cur.ptr(), layer.w.value.ptr(), layer.b.value.ptr(), out.ptr(),
                       layer.in_shape[0], layer.in_shape[1], layer.spec.out_channels);
        break;
      case LayerSpec::Kind::MaxPool2x2: {
        int h = layer.in_shape[0], w = layer.in_shape[1], c = layer.in_shape[2];
        int oh = h / 2, ow = w / 2;
        std::vector<int>* argmax = nullptr;
        if (trace) {
          trace->layers[i].argmax.assign(static_cast<size_t>(oh) * ow * c, 0);
          argmax = &trace->layers[i].argmax;
        }
        for (int y = 0; y < oh; ++y) {
          for (int x = 0; x < ow; ++x) {
            for (int ch = 0; ch < c; ++ch) {
              int best = ((2 * y) * w + 2 * x) * c + ch;
              float bv = cur.data[best];
              for (int dy = 0; dy < 2; ++dy) {
                for (int dx = 0; dx < 2; ++dx) {
                  int idx = ((2 * y + dy) * w + (2 * x + dx)) * c + ch;
                  if (cur.data[idx] > bv) {
                    bv = cur.data[idx];
                    best = idx;
                  }
                }
              }
              out.data[(static_cast<long>(y) * ow + x) * c + ch] = bv;
              if (argmax) (*argmax)[(static_cast<size_t>(y) * ow + x) * c + ch] = best;
            }
          }
        }
        break;
      }
      case LayerSpec::Kind::FullyConnected: {
        int in_dim = layer.spec.in_dim, out_dim = layer.spec.out_dim;
        const float* w = layer.w.value.ptr();
        const float* b = layer.b.value.ptr();
        for (int o = 0; o < out_dim; ++o) {
          const float* wrow = w + static_cast<long>(o) * in_dim;
          float acc = b[o];
          for (int k = 0; k < in_dim; ++k) acc += wrow[k] * cur.data[k];
          out.data[o] = acc;
        }
        break;
      }
      case LayerSpec::Kind::Relu:
        for (long k = 0; k < cur.numel(); ++k) out.data[k] = cur.data[k] > 0.0f ? cur.data[k] : 0.0f;
        break;
      case LayerSpec::Kind::Sigmoid:
        sigmoid(cur.ptr(), out.ptr(), static_cast<int>(cur.numel()));
        break;
      case LayerSpec::Kind::Softmax:
        softmax(cur.ptr(), out.ptr(), static_cast<int>(cur.numel()));
        break;
      case LayerSpec::Kind::Dropout: {
        if (mode == Mode::Train) {
          if (!rng) {
            throw std::invalid_argument(layer_id(name_, i, layer.spec) +
                                        ": dropout in train mode requires an rng");
          }
          float keep = 1.0f - layer.spec.rate;
          float scale = 1.0f / keep;
          Tensor mask(layer.in_shape);
          for (long k = 0; k < cur.numel(); ++k) {
            mask.data[k] = rng->uniform() < keep ? scale : 0.0f;
            out.data[k] = cur.data[k] * mask.data[k];
          }
          if (trace) trace->layers[i].mask = std::move(mask);
        } else {
          out = cur;
          if (trace) trace->layers[i].mask = Tensor();
        }
        break;
      }
      case LayerSpec::Kind::LstmCell:
        break;  // rejected at construction
    }
    if (trace) {
      trace->layers[i].output = out;
    }
    cur = std::move(out);
  }
  if (trace) trace->valid = true;
  return cur;
}

Tensor Network::backward(const Trace& trace, const Tensor& output_grad, bool need_input_grad) {
  if (!trace.valid || trace.layers.size() != layers_.size()) {
    throw std::logic_error("network " + name_ + ": backward without a matching traced forward");
  }
  if (output_grad.shape != output_shape()) {
    throw std::invalid_argument("network " + name_ + ": output grad shape " +
                                shape_str(output_grad.shape) + " does not match " +
                                shape_str(output_shape()));
  }

  Tensor grad = output_grad;
  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
    Layer& layer = layers_[i];
    const Tensor& input = i == 0 ? trace.input : trace.layers[i - 1].output;
    const Tensor& output = trace.layers[i].output;
    bool want_din = need_input_grad || i > 0;
    Tensor din(layer.in_shape);
    switch (layer.spec.kind) {
      case LayerSpec::Kind::Conv3x3:
        conv3x3_backward(input.ptr(), layer.w.value.ptr(), grad.ptr(), layer.w.grad.ptr(),
                         layer.b.grad.ptr(), want_din ? din.ptr() : nullptr, layer.in_shape[0],
                         layer.in_shape[1], layer.in_shape[2], layer.spec.out_channels);
        break;
      case LayerSpec::Kind::Conv1dK3:
        conv1d_backward(input.ptr(), layer.w.value.ptr(), grad.ptr(), layer.w.grad.ptr(),
                        layer.b.grad.ptr(), want_din ? din.ptr() : nullptr, layer.in_shape[0],
                        layer.in_shape[1], layer.spec.out_channels);
        break;
      case LayerSpec::Kind::MaxPool2x2: {
        const auto& argmax = trace.layers[i].argmax;
        if (argmax.size() != static_cast<size_t>(grad.numel())) {
          throw std::logic_error("network " + name_ + ": pool trace missing");
        }
        for (long k = 0; k < grad.numel(); ++k) din.data[argmax[k]] += grad.data[k];
        break;
      }
      case LayerSpec::Kind::FullyConnected: {
        int in_dim = layer.spec.in_dim, out_dim = layer.spec.out_dim;
        const float* w = layer.w.value.ptr();
        float* dw = layer.w.grad.ptr();
        for (int o = 0; o < out_dim; ++o) {
          float g = grad.data[o];
          layer.b.grad.data[o] += g;
          float* dwrow = dw + static_cast<long>(o) * in_dim;
          for (int k = 0; k < in_dim; ++k) dwrow[k] += g * input.data[k];
          if (want_din) {
            const float* wrow = w + static_cast<long>(o) * in_dim;
            for (int k = 0; k < in_dim; ++k) din.data[k] += g * wrow[k];
          }
        }
        break;
      }
      case LayerSpec::Kind::Relu:
        for (long k = 0; k < grad.numel(); ++k)
          din.data[k] = output.data[k] > 0.0f ? grad.data[k] : 0.0f;
        break;
      case LayerSpec::Kind::Sigmoid:
        sigmoid_backward(output.ptr(), grad.ptr(), din.ptr(), static_cast<int>(grad.numel()));
        break;
      case LayerSpec::Kind::Softmax:
        softmax_backward(output.ptr(), grad.ptr(), din.ptr(), static_cast<int>(grad.numel()));
        break;
      case LayerSpec::Kind::Dropout: {
        const Tensor& mask = trace.layers[i].mask;
        if (mask.empty()) {
          din = grad;  // eval-mode trace: identity
        } else {
          for (long k = 0; k < grad.numel(); ++k) din.data[k] = grad.data[k] * mask.data[k];
        }
        break;
      }
      case LayerSpec::Kind::LstmCell:
        break;
    }
    grad = std::move(din);
  }
  return grad;
}

std::vector<Parameter*> Network::params() {
  std::vector<Parameter*> out;
  for (auto& layer : layers_) {
    if (!layer.w.value.empty()) out.push_back(&layer.w);
    if (!layer.b.value.empty()) out.push_back(&layer.b);
  }
  return out;
}

long Network::param_count() const {
  long n = 0;
  for (const auto& layer : layers_) n += layer.w.value.numel() + layer.b.value.numel();
  return n;
}

std::vector<Network::LayerInfo> Network::layers_info() const {
  std::vector<LayerInfo> out;
  out.reserve(layers_.size());
  for (const auto& layer : layers_) {
    out.push_back({&layer.spec, &layer.in_shape, &layer.out_shape, &layer.w, &layer.b});
  }
  return out;
}

}  // namespace switchlab::diff
