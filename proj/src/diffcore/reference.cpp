#include "switchlab/diffcore/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace switchlab::diff {

namespace {

using dvec = std::vector<double>;

dvec to_double(const Tensor& t) {
  dvec out(t.data.begin(), t.data.end());
  return out;
}

double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<double> reference_forward(const Network& net, const Tensor& input, Mode mode,
                                      Rng* rng) {
  dvec cur = to_double(input);
  for (const auto& info : net.layers_info()) {
    const LayerSpec& spec = *info.spec;
    const Shape& ins = *info.in_shape;
    const Shape& outs = *info.out_shape;
    dvec next(static_cast<size_t>(shape_numel(outs)), 0.0);
    switch (spec.kind) {
      case LayerSpec::Kind::Conv3x3: {
        int h = ins[0], w = ins[1], cin = ins[2], cout = spec.out_channels;
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            for (int oc = 0; oc < cout; ++oc) {
              double acc = info.b->value.data[oc];
              for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                  int yy = y + dy, xx = x + dx;
                  if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
                  for (int ic = 0; ic < cin; ++ic) {
                    double win =
                        info.w->value.data[(((dy + 1) * 3 + (dx + 1)) * cin + ic) * cout + oc];
                    acc += cur[(static_cast<size_t>(yy) * w + xx) * cin + ic] * win;
                  }
                }
              next[(static_cast<size_t>(y) * w + x) * cout + oc] = acc;
            }
        break;
      }
      case LayerSpec::Kind::Conv1dK3: {
        int t = ins[0], cin = ins[1], cout = spec.out_channels;
        for (int i = 0; i < t; ++i)
          for (int oc = 0; oc < cout; ++oc) {
            double acc = info.b->value.data[oc];
            for (int dt = -1; dt <= 1; ++dt) {
              int ii = i + dt;
              if (ii < 0 || ii >= t) continue;
              for (int ic = 0; ic < cin; ++ic) {
                acc += cur[static_cast<size_t>(ii) * cin + ic] *
                       info.w->value.data[((dt + 1) * cin + ic) * cout + oc];
              }
            }
            next[static_cast<size_t>(i) * cout + oc] = acc;
          }
        break;
      }
      case LayerSpec::Kind::MaxPool2x2: {
        int h = ins[0], w = ins[1], c = ins[2];
        int oh = h / 2, ow = w / 2;
        for (int y = 0; y < oh; ++y)
          for (int x = 0; x < ow; ++x)
            for (int ch = 0; ch < c; ++ch) {
              double best = cur[(static_cast<size_t>(2 * y) * w + 2 * x) * c + ch];
              for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx)
                  best = std::max(
                      best, cur[(static_cast<size_t>(2 * y + dy) * w + 2 * x + dx) * c + ch]);
              next[(static_cast<size_t>(y) * ow + x) * c + ch] = best;
            }
        break;
      }
      case LayerSpec::Kind::FullyConnected: {
        for (int o = 0; o < spec.out_dim; ++o) {
          double acc = info.b->value.data[o];
          for (int k = 0; k < spec.in_dim; ++k)
            acc += info.w->value.data[static_cast<size_t>(o) * spec.in_dim + k] * cur[k];
          next[o] = acc;
        }
        break;
      }
      case LayerSpec::Kind::Relu:
        for (size_t i = 0; i < cur.size(); ++i) next[i] = cur[i] > 0.0 ? cur[i] : 0.0;
        break;
      case LayerSpec::Kind::Sigmoid:
        for (size_t i = 0; i < cur.size(); ++i) next[i] = sigm(cur[i]);
        break;
      case LayerSpec::Kind::Softmax: {
        double mx = cur[0];
        for (double v : cur) mx = std::max(mx, v);
        double sum = 0.0;
        for (size_t i = 0; i < cur.size(); ++i) {
          next[i] = std::exp(cur[i] - mx);
          sum += next[i];
        }
        for (auto& v : next) v /= sum;
        break;
      }
      case LayerSpec::Kind::Dropout: {
        if (mode == Mode::Train) {
          if (!rng) throw std::invalid_argument("reference_forward: dropout needs an rng");
          float keep = 1.0f - spec.rate;
          double scale = 1.0 / keep;
          for (size_t i = 0; i < cur.size(); ++i)
            next[i] = rng->uniform() < keep ? cur[i] * scale : 0.0;
        } else {
          next = cur;
        }
        break;
      }
      case LayerSpec::Kind::LstmCell:
        throw std::logic_error("reference_forward: unexpected lstm layer");
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> reference_lstm_step(const LstmCell& cell, const Tensor& x,
                                        const LstmCell::State& prev) {
  int hd = cell.hidden_dim();
  int in = cell.input_dim();
  int cols = in + hd;
  dvec gates(4 * static_cast<size_t>(hd));
  for (int r = 0; r < 4 * hd; ++r) {
    double acc = cell.bias().value.data[r];
    for (int j = 0; j < in; ++j)
      acc += static_cast<double>(cell.weight().value.data[static_cast<size_t>(r) * cols + j]) *
             x.data[j];
    for (int j = 0; j < hd; ++j)
      acc += static_cast<double>(
                 cell.weight().value.data[static_cast<size_t>(r) * cols + in + j]) *
             prev.h.data[j];
    gates[r] = acc;
  }
  dvec out(2 * static_cast<size_t>(hd));
  for (int k = 0; k < hd; ++k) {
    double ig = sigm(gates[k]);
    double fg = sigm(gates[hd + k]);
    double gg = std::tanh(gates[2 * hd + k]);
    double og = sigm(gates[3 * hd + k]);
    double c = fg * prev.c.data[k] + ig * gg;
    out[hd + k] = c;
    out[k] = og * std::tanh(c);
  }
  return out;
}

}  // namespace switchlab::diff
