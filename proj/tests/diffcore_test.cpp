#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "switchlab/diffcore/adam.hpp"
#include "switchlab/diffcore/checkpoint.hpp"
#include "switchlab/diffcore/gradcheck.hpp"
#include "switchlab/diffcore/losses.hpp"
#include "switchlab/diffcore/lstm.hpp"
#include "switchlab/diffcore/network.hpp"
#include "switchlab/diffcore/ops.hpp"
#include "switchlab/diffcore/reference.hpp"

using namespace switchlab::diff;

namespace {

Tensor random_tensor(Shape shape, Rng& rng, float scale = 1.0f) {
  Tensor t(std::move(shape));
  for (auto& v : t.data) v = rng.gaussian() * scale;
  return t;
}

// loss = sum_i u_i * y_i with fixed u, evaluated through the double-precision
// reference with a fresh identically seeded rng so dropout masks repeat
// across perturbed evaluations.
double weighted_output_loss(const Network& net, const Tensor& input, const Tensor& u,
                            uint64_t rng_seed) {
  Rng rng(rng_seed, 99);
  std::vector<double> y = reference_forward(net, input, Mode::Train, &rng);
  double acc = 0.0;
  for (size_t i = 0; i < y.size(); ++i) acc += static_cast<double>(u.data[i]) * y[i];
  return acc;
}

double checked_rel_err(Network& net, const Tensor& input, uint64_t rng_seed) {
  Rng urng(rng_seed + 1, 5);
  Tensor u = random_tensor(net.output_shape(), urng);

  Rng rng(rng_seed, 99);
  Trace trace;
  net.forward(input, Mode::Train, &rng, &trace);
  net.backward(trace, u, false);

  auto res = check_gradients(
      net.params(), [&]() { return weighted_output_loss(net, input, u, rng_seed); }, {});
  for (Parameter* p : net.params()) p->grad.zero();
  return res.max_rel_err;
}

}  // namespace

TEST_CASE("conv stack maps 32x32x3 to 4x4x32") {
  Rng rng(1);
  Network net("obs", {32, 32, 3},
              {LayerSpec::conv3x3(3, 8), LayerSpec::relu(), LayerSpec::maxpool2x2(),
               LayerSpec::conv3x3(8, 16), LayerSpec::relu(), LayerSpec::maxpool2x2(),
               LayerSpec::conv3x3(16, 32), LayerSpec::relu(), LayerSpec::maxpool2x2()},
              rng);
  CHECK(net.output_shape() == Shape{4, 4, 32});
  Tensor in = random_tensor({32, 32, 3}, rng);
  Tensor out = net.forward(in, Mode::Eval);
  CHECK(out.shape == Shape{4, 4, 32});
  CHECK(out.all_finite());
}

TEST_CASE("relu and softmax basics") {
  Rng rng(2);
  Network relu_net("r", {3}, {LayerSpec::relu()}, rng);
  Tensor out = relu_net.forward(Tensor::of({-1.0f, 0.0f, 2.0f}), Mode::Eval);
  CHECK(out.data == std::vector<float>{0.0f, 0.0f, 2.0f});

  for (int n : {2, 5, 17}) {
    Network sm("s", {n}, {LayerSpec::softmax()}, rng);
    Tensor y = sm.forward(Tensor::zeros({n}), Mode::Eval);
    float sum = 0.0f;
    for (float v : y.data) {
      CHECK(v == doctest::Approx(1.0f / n));
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0f));
  }
}

TEST_CASE("softmax output is a distribution for random logits") {
  Rng rng(3);
  Network sm("s", {9}, {LayerSpec::softmax()}, rng);
  for (int probe = 0; probe < 200; ++probe) {
    Tensor x = random_tensor({9}, rng, 4.0f);
    Tensor y = sm.forward(x, Mode::Eval);
    float sum = 0.0f;
    for (float v : y.data) {
      CHECK(v >= 0.0f);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0f) < 1e-5f);
  }
}

TEST_CASE("fully connected backward matches u x^T for linear loss") {
  Rng rng(4);
  Network net("fc", {3}, {LayerSpec::fully_connected(3, 2)}, rng);
  Tensor x = Tensor::of({0.5f, -1.0f, 2.0f});
  Tensor u = Tensor::of({0.7f, -0.2f});

  Trace trace;
  net.forward(x, Mode::Train, nullptr, &trace);
  net.backward(trace, u, false);

  auto params = net.params();  // [w, b]
  Parameter* w = params[0];
  for (int o = 0; o < 2; ++o)
    for (int i = 0; i < 3; ++i)
      CHECK(w->grad.at(o, i) == doctest::Approx(u.data[o] * x.data[i]));

  SUBCASE("zero upstream leaves accumulated grads unchanged") {
    Tensor snapshot = w->grad;
    Trace trace2;
    net.forward(x, Mode::Train, nullptr, &trace2);
    net.backward(trace2, Tensor::zeros({2}), false);
    CHECK(w->grad.data == snapshot.data);
  }
}

TEST_CASE("finite differences confirm gradients for every layer kind") {
  Rng rng(5);

  SUBCASE("conv3x3") {
    Network net("c", {5, 4, 3}, {LayerSpec::conv3x3(3, 4)}, rng);
    Tensor in = random_tensor({5, 4, 3}, rng);
    CHECK(checked_rel_err(net, in, 11) < 1e-3);
  }
  SUBCASE("conv1d_k3") {
    Network net("t", {6, 4}, {LayerSpec::conv1d_k3(4, 5)}, rng);
    Tensor in = random_tensor({6, 4}, rng);
    CHECK(checked_rel_err(net, in, 12) < 1e-3);
  }
  SUBCASE("fully connected") {
    Network net("f", {7}, {LayerSpec::fully_connected(7, 4)}, rng);
    Tensor in = random_tensor({7}, rng);
    CHECK(checked_rel_err(net, in, 13) < 1e-3);
  }
  SUBCASE("maxpool behind conv") {
    Network net("p", {4, 4, 2}, {LayerSpec::conv3x3(2, 3), LayerSpec::maxpool2x2()}, rng);
    // Central differences cross the pool kink when a window's top two values
    // are within the perturbation's reach, so insist on a decisive margin.
    Tensor in;
    for (int attempt = 0; attempt < 100; ++attempt) {
      in = random_tensor({4, 4, 2}, rng);
      Trace probe;
      net.forward(in, Mode::Eval, nullptr, &probe);
      const Tensor& conv_out = probe.layers[0].output;  // 4x4x3
      float margin = 1e9f;
      for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x)
          for (int c = 0; c < 3; ++c) {
            float best = -1e9f, second = -1e9f;
            for (int dy = 0; dy < 2; ++dy)
              for (int dx = 0; dx < 2; ++dx) {
                float v = conv_out.data[(((2 * y + dy) * 4) + (2 * x + dx)) * 3 + c];
                if (v > best) {
                  second = best;
                  best = v;
                } else if (v > second) {
                  second = v;
                }
              }
            margin = std::min(margin, best - second);
          }
      if (margin > 0.05f) break;
    }
    CHECK(checked_rel_err(net, in, 14) < 1e-3);
  }
  SUBCASE("relu behind fc") {
    Network net("r", {6}, {LayerSpec::fully_connected(6, 5), LayerSpec::relu()}, rng);
    Tensor in = random_tensor({6}, rng);
    CHECK(checked_rel_err(net, in, 15) < 1e-3);
  }
  SUBCASE("sigmoid behind fc") {
    Network net("s", {6}, {LayerSpec::fully_connected(6, 5), LayerSpec::sigmoid()}, rng);
    Tensor in = random_tensor({6}, rng);
    CHECK(checked_rel_err(net, in, 16) < 1e-3);
  }
  SUBCASE("softmax behind fc") {
    Network net("m", {6}, {LayerSpec::fully_connected(6, 5), LayerSpec::softmax()}, rng);
    Tensor in = random_tensor({6}, rng);
    CHECK(checked_rel_err(net, in, 17) < 1e-3);
  }
  SUBCASE("dropout behind fc") {
    Network net("d", {6}, {LayerSpec::fully_connected(6, 8), LayerSpec::dropout(0.3f)}, rng);
    Tensor in = random_tensor({6}, rng);
    CHECK(checked_rel_err(net, in, 18) < 1e-3);
  }
  SUBCASE("small conv stack end to end") {
    Network net("e", {8, 8, 3},
                {LayerSpec::conv3x3(3, 4), LayerSpec::relu(), LayerSpec::maxpool2x2(),
                 LayerSpec::conv3x3(4, 6), LayerSpec::relu(), LayerSpec::maxpool2x2(),
                 LayerSpec::fully_connected(2 * 2 * 6, 5)},
                rng);
    Tensor in = random_tensor({8, 8, 3}, rng);
    CHECK(checked_rel_err(net, in, 19) < 1e-3);
  }
}

TEST_CASE("lstm cell gradients match finite differences") {
  Rng rng(6);
  LstmCell cell("lstm", 5, 4, rng);
  Tensor x = random_tensor({5}, rng);
  LstmCell::State prev{random_tensor({4}, rng, 0.5f), random_tensor({4}, rng, 0.5f)};
  Tensor uh = random_tensor({4}, rng);
  Tensor uc = random_tensor({4}, rng);

  auto loss = [&]() {
    std::vector<double> hc = reference_lstm_step(cell, x, prev);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i)
      acc += static_cast<double>(uh.data[i]) * hc[i] + static_cast<double>(uc.data[i]) * hc[4 + i];
    return acc;
  };

  LstmCell::StepTrace trace;
  cell.step(x, prev, &trace);
  Tensor dx({5}), dh({4}), dc({4});
  cell.backward(trace, uh, uc, dx, dh, dc);

  auto res = check_gradients(cell.params(), loss, {});
  CHECK(res.max_rel_err < 1e-3);
}

TEST_CASE("dropout expectation matches eval output and eval is identity") {
  Rng rng(7);
  Network net("d", {16}, {LayerSpec::dropout(0.3f)}, rng);
  Tensor in = random_tensor({16}, rng);
  in.data[3] = 1.7f;

  Tensor eval_out = net.forward(in, Mode::Eval);
  CHECK(eval_out.data == in.data);

  Rng drop_rng(123, 1);
  std::vector<double> mean(16, 0.0);
  const int probes = 10000;
  for (int k = 0; k < probes; ++k) {
    Tensor y = net.forward(in, Mode::Train, &drop_rng);
    for (int i = 0; i < 16; ++i) mean[i] += y.data[i];
  }
  for (int i = 0; i < 16; ++i) {
    double m = mean[i] / probes;
    CHECK(std::abs(m - in.data[i]) < 0.05 * std::abs(in.data[i]) + 0.01);
  }
}

TEST_CASE("fast forward agrees with the double-precision reference") {
  Rng rng(8);
  Network net("agree", {8, 8, 3},
              {LayerSpec::conv3x3(3, 4), LayerSpec::relu(), LayerSpec::maxpool2x2(),
               LayerSpec::conv3x3(4, 6), LayerSpec::relu(), LayerSpec::maxpool2x2(),
               LayerSpec::fully_connected(2 * 2 * 6, 5), LayerSpec::softmax()},
              rng);
  for (int probe = 0; probe < 20; ++probe) {
    Tensor in = random_tensor({8, 8, 3}, rng);
    Tensor fast = net.forward(in, Mode::Eval);
    std::vector<double> ref = reference_forward(net, in, Mode::Eval, nullptr);
    for (long i = 0; i < fast.numel(); ++i)
      CHECK(fast.data[i] == doctest::Approx(ref[i]).epsilon(1e-4));
  }

  LstmCell cell("lstm", 3, 4, rng);
  Tensor x = random_tensor({3}, rng);
  LstmCell::State prev{random_tensor({4}, rng), random_tensor({4}, rng)};
  auto next = cell.step(x, prev);
  std::vector<double> ref = reference_lstm_step(cell, x, prev);
  for (int i = 0; i < 4; ++i) {
    CHECK(next.h.data[i] == doctest::Approx(ref[i]).epsilon(1e-4));
    CHECK(next.c.data[i] == doctest::Approx(ref[4 + i]).epsilon(1e-4));
  }
}

TEST_CASE("eval forward is bit-identical for the same seed") {
  auto build = [] {
    Rng rng(42);
    return Network("n", {6, 6, 2},
                   {LayerSpec::conv3x3(2, 4), LayerSpec::relu(), LayerSpec::maxpool2x2(),
                    LayerSpec::fully_connected(3 * 3 * 4, 3), LayerSpec::softmax()},
                   rng);
  };
  Network a = build();
  Network b = build();
  Rng in_rng(9);
  Tensor in = random_tensor({6, 6, 2}, in_rng);
  Tensor ya = a.forward(in, Mode::Eval);
  Tensor yb = b.forward(in, Mode::Eval);
  CHECK(ya.data == yb.data);
}

TEST_CASE("adam") {
  SUBCASE("first step moves by about lr against the gradient sign") {
    Parameter p("p", Tensor::of({1.0f}));
    p.grad.data[0] = 0.37f;
    adam_step({&p}, {.lr = 0.01f});
    CHECK(p.value.data[0] == doctest::Approx(1.0f - 0.01f).epsilon(1e-3));
    CHECK(p.step_count == 1);
    CHECK(p.grad.data[0] == 0.0f);
  }

  SUBCASE("zero gradient leaves parameters unchanged") {
    Parameter p("p", Tensor::of({0.5f, -0.25f}));
    adam_step({&p}, {.lr = 0.01f});
    CHECK(p.value.data == std::vector<float>{0.5f, -0.25f});
  }

  SUBCASE("constant gradient keeps step magnitude from growing") {
    Parameter p("p", Tensor::of({0.0f}));
    p.grad.data[0] = 1.3f;
    adam_step({&p}, {.lr = 0.01f});
    float d1 = std::abs(p.value.data[0] - 0.0f);
    float v1 = p.value.data[0];
    p.grad.data[0] = 1.3f;
    adam_step({&p}, {.lr = 0.01f});
    float d2 = std::abs(p.value.data[0] - v1);
    CHECK(d2 <= d1 * 1.0001f);
  }

  SUBCASE("matches a scalar double-precision reference over many steps") {
    struct RefAdam {
      double m = 0.0, v = 0.0;
      long t = 0;
      double update(double g, double lr) {
        t += 1;
        m = 0.9 * m + 0.1 * g;
        v = 0.999 * v + 0.001 * g * g;
        double mh = m / (1.0 - std::pow(0.9, t));
        double vh = v / (1.0 - std::pow(0.999, t));
        return lr * mh / (std::sqrt(vh) + 1e-8);
      }
    };
    Parameter p("p", Tensor::of({0.2f}));
    RefAdam ref;
    double ref_value = 0.2;
    Rng rng(11);
    for (int step = 0; step < 50; ++step) {
      float g = rng.gaussian();
      p.grad.data[0] = g;
      adam_step({&p}, {.lr = 0.003f});
      ref_value -= ref.update(g, 0.003);
      CHECK(p.value.data[0] == doctest::Approx(ref_value).epsilon(1e-4));
    }
  }

  SUBCASE("non-finite gradient aborts with the parameter name") {
    Parameter p("layer7/w", Tensor::of({1.0f}));
    p.grad.data[0] = std::nanf("");
    CHECK_THROWS_WITH_AS(adam_step({&p}, {.lr = 0.01f}),
                         doctest::Contains("layer7/w"), std::runtime_error);
    CHECK(p.value.data[0] == 1.0f);
  }
}

TEST_CASE("losses") {
  Tensor x = Tensor::of({0.3f, -0.7f, 2.0f});
  CHECK(l2_loss(x, x) == 0.0f);
  CHECK(l2_loss(Tensor::of({1.0f, 0.0f}), Tensor::of({0.0f, 0.0f})) == doctest::Approx(0.5f));

  CHECK(cross_entropy(Tensor::of({20.0f, -20.0f}), 0) < 1e-6f);
  CHECK(cross_entropy(Tensor::of({0.0f, 0.0f}), 1) == doctest::Approx(std::log(2.0)));

  SUBCASE("gradients agree with finite differences") {
    Rng rng(13);
    Network net("f", {4}, {LayerSpec::fully_connected(4, 3)}, rng);
    Tensor in = random_tensor({4}, rng);
    Tensor target = random_tensor({3}, rng);

    Trace trace;
    Tensor y = net.forward(in, Mode::Train, nullptr, &trace);
    Tensor dl(y.shape);
    l2_loss_grad(y, target, dl);
    net.backward(trace, dl, false);
    auto res = check_gradients(net.params(), [&]() {
      std::vector<double> out = reference_forward(net, in, Mode::Eval, nullptr);
      double acc = 0.0;
      for (size_t i = 0; i < out.size(); ++i) {
        double d = out[i] - target.data[i];
        acc += d * d;
      }
      return acc / static_cast<double>(out.size());
    });
    CHECK(res.max_rel_err < 1e-3);
    for (Parameter* p : net.params()) p->grad.zero();

    Trace trace2;
    Tensor y2 = net.forward(in, Mode::Train, nullptr, &trace2);
    Tensor dl2(y2.shape);
    cross_entropy_grad(y2, 2, dl2);
    net.backward(trace2, dl2, false);
    auto res2 = check_gradients(net.params(), [&]() {
      std::vector<double> out = reference_forward(net, in, Mode::Eval, nullptr);
      double mx = std::max({out[0], out[1], out[2]});
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += std::exp(out[i] - mx);
      return mx + std::log(s) - out[2];
    });
    CHECK(res2.max_rel_err < 1e-3);
  }

  CHECK_THROWS_AS(l2_loss(Tensor::of({1.0f}), Tensor::of({1.0f, 2.0f})), std::invalid_argument);
  CHECK_THROWS_AS(cross_entropy(Tensor::of({1.0f, 2.0f}), 2), std::invalid_argument);
  CHECK_THROWS_AS(cross_entropy(Tensor::of({1.0f, 2.0f}), -1), std::invalid_argument);
}

TEST_CASE("configuration and usage errors") {
  Rng rng(21);
  CHECK_THROWS_WITH_AS(Network("bad", {8, 8, 3}, {LayerSpec::conv3x3(4, 8)}, rng),
                       doctest::Contains("bad/0:conv3x3"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(Network("bad", {10}, {LayerSpec::fully_connected(8, 2)}, rng),
                       doctest::Contains("bad/0:fullyconnected"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(Network("bad", {5, 5, 2}, {LayerSpec::maxpool2x2()}, rng),
                       doctest::Contains("maxpool"), std::invalid_argument);
  CHECK_THROWS_AS(Network("bad", {8}, {LayerSpec::lstm_cell(4)}, rng), std::invalid_argument);

  Network net("n", {4}, {LayerSpec::fully_connected(4, 2)}, rng);
  Trace never_used;
  CHECK_THROWS_AS(net.backward(never_used, Tensor::zeros({2})), std::logic_error);
  CHECK_THROWS_AS(net.forward(Tensor::zeros({5}), Mode::Eval), std::invalid_argument);

  Network drop("d", {4}, {LayerSpec::dropout(0.5f)}, rng);
  CHECK_THROWS_AS(drop.forward(Tensor::zeros({4}), Mode::Train, nullptr), std::invalid_argument);
}

TEST_CASE("checkpoint roundtrip and validation") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "switchlab_ckpt_test";
  fs::create_directories(dir);
  fs::path file = dir / "model.ckp";

  Rng rng(31);
  Tensor a = random_tensor({3, 4}, rng);
  Tensor b = random_tensor({7}, rng);
  save_checkpoint(file, {{"enc/w", &a}, {"enc/b", &b}});

  auto loaded = load_checkpoint(file);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded.at("enc/w").shape == Shape{3, 4});
  CHECK(loaded.at("enc/w").data == a.data);
  CHECK(loaded.at("enc/b").data == b.data);

  SUBCASE("re-serialization is byte-identical") {
    fs::path file2 = dir / "model2.ckp";
    save_checkpoint(file2, {{"enc/w", &loaded.at("enc/w")}, {"enc/b", &loaded.at("enc/b")}});
    std::ifstream f1(file, std::ios::binary), f2(file2, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
  }

  SUBCASE("bad magic is rejected") {
    fs::path bad = dir / "bad.ckp";
    std::ofstream f(bad, std::ios::binary);
    f << "NOPE" << std::string(16, '\0');
    f.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(bad), doctest::Contains("magic"), std::runtime_error);
  }

  SUBCASE("truncated payload is rejected") {
    std::ifstream f(file, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    f.close();
    fs::path trunc = dir / "trunc.ckp";
    std::ofstream out(trunc, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 5));
    out.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(trunc), doctest::Contains("truncated"),
                         std::runtime_error);
  }

  SUBCASE("trailing bytes are rejected") {
    std::ifstream f(file, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    f.close();
    fs::path pad = dir / "pad.ckp";
    std::ofstream out(pad, std::ios::binary);
    out << bytes << "xx";
    out.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(pad), doctest::Contains("trailing"), std::runtime_error);
  }

  SUBCASE("restore_params checks names and shapes") {
    Parameter p1("enc/w", Tensor({3, 4}));
    Parameter p2("enc/b", Tensor({7}));
    restore_params(loaded, {&p1, &p2});
    CHECK(p1.value.data == a.data);

    Parameter missing("other/w", Tensor({3, 4}));
    CHECK_THROWS_AS(restore_params(loaded, {&missing}), std::runtime_error);
    Parameter wrong_shape("enc/w", Tensor({4, 3}));
    CHECK_THROWS_AS(restore_params(loaded, {&wrong_shape}), std::runtime_error);
  }

  fs::remove_all(dir);
}
