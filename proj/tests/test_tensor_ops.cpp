// Copyright 2026 The snn2ann Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>

#include "snn2ann/ops.hpp"
#include "test_util.hpp"

using namespace s2a;
using s2a::testing::random_tensor;
using s2a::testing::rel_close;

namespace {

// Independent oracle: direct 6-loop cross-correlation in double precision.
Tensor conv2d_oracle(const Tensor& input, const Tensor& weight,
                     const Tensor& bias, int64_t stride, int64_t pad) {
  const int64_t N = input.shape[0], C = input.shape[1], H = input.shape[2],
                W = input.shape[3];
  const int64_t F = weight.shape[0], K = weight.shape[2];
  const int64_t HO = (H + 2 * pad - K) / stride + 1;
  const int64_t WO = (W + 2 * pad - K) / stride + 1;
  Tensor out({N, F, HO, WO});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t f = 0; f < F; ++f)
      for (int64_t oy = 0; oy < HO; ++oy)
        for (int64_t ox = 0; ox < WO; ++ox) {
          double acc = bias[size_t(f)];
          for (int64_t c = 0; c < C; ++c)
            for (int64_t ky = 0; ky < K; ++ky)
              for (int64_t kx = 0; kx < K; ++kx) {
                const int64_t iy = oy * stride + ky - pad;
                const int64_t ix = ox * stride + kx - pad;
                if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
                acc += double(input[size_t(((n * C + c) * H + iy) * W + ix)]) *
                       double(weight[size_t(((f * C + c) * K + ky) * K + kx)]);
              }
          out[size_t(((n * F + f) * HO + oy) * WO + ox)] = float(acc);
        }
  return out;
}

// FD of a scalar sum-loss with the sum accumulated in double.
double sum_all(const Tensor& t) {
  double s = 0.0;
  for (float v : t.data) s += v;
  return s;
}

}  // namespace

TEST_CASE("conv2d forward: all-ones 3x3 kernel sums to 9") {
  Tensor input({1, 1, 3, 3});
  input.fill(1.0f);
  Tensor weight({1, 1, 3, 3});
  weight.fill(1.0f);
  Tensor bias({1});
  Tensor out = conv2d_forward(input, weight, bias, 1, 0);
  CHECK(out.shape == std::vector<int64_t>{1, 1, 1, 1});
  CHECK(out[0] == doctest::Approx(9.0f));
}

TEST_CASE("conv2d forward: zero input gives constant bias") {
  std::mt19937 rng(1);
  Tensor input({2, 2, 5, 5});
  Tensor weight = random_tensor({3, 2, 3, 3}, rng);
  Tensor bias({3});
  bias[0] = 0.5f;
  bias[1] = -1.25f;
  bias[2] = 2.0f;
  Tensor out = conv2d_forward(input, weight, bias, 1, 1);
  const int64_t plane = out.shape[2] * out.shape[3];
  for (int64_t n = 0; n < 2; ++n)
    for (int64_t f = 0; f < 3; ++f)
      for (int64_t p = 0; p < plane; ++p)
        CHECK(out[size_t((n * 3 + f) * plane + p)] == bias[size_t(f)]);
}

TEST_CASE("conv2d forward matches the 6-loop oracle") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int64_t> ch(1, 3), sz(3, 7), kk(1, 3),
        st(1, 2), pp(0, 1);
    const int64_t c = ch(rng), h = sz(rng), w = sz(rng);
    int64_t k = kk(rng);
    const int64_t stride = st(rng), pad = pp(rng);
    if (k > h + 2 * pad) k = 1;
    if (k > w + 2 * pad) k = 1;
    Tensor input = random_tensor({2, c, h, w}, rng);
    Tensor weight = random_tensor({2, c, k, k}, rng);
    Tensor bias = random_tensor({2}, rng);
    Tensor got = conv2d_forward(input, weight, bias, stride, pad);
    Tensor want = conv2d_oracle(input, weight, bias, stride, pad);
    CHECK(testing::approx_eq(got, want, 1e-6f, 1e-6f));
  }
}

TEST_CASE("conv2d rejects inconsistent shapes") {
  Tensor input({1, 2, 4, 4});
  Tensor weight({1, 3, 3, 3});  // channel mismatch
  Tensor bias({1});
  CHECK_THROWS_AS(conv2d_forward(input, weight, bias, 1, 0), Error);
  Tensor big({1, 2, 9, 9});  // kernel larger than padded input
  CHECK_THROWS_AS(conv2d_forward(input, Tensor({1, 2, 6, 6}), bias, 1, 0),
                  Error);
}

TEST_CASE("conv2d backward: zero grad_out gives zero gradients") {
  std::mt19937 rng(3);
  Tensor input = random_tensor({1, 2, 5, 5}, rng);
  Tensor weight = random_tensor({2, 2, 3, 3}, rng);
  Tensor grad_out({1, 2, 3, 3});
  Conv2dGrads g = conv2d_backward(grad_out, input, weight, 1, 0);
  for (float v : g.grad_input.data) CHECK(v == 0.0f);
  for (float v : g.grad_weight.data) CHECK(v == 0.0f);
  for (float v : g.grad_bias.data) CHECK(v == 0.0f);
}

TEST_CASE("conv2d backward: single-pixel grad_out extracts the input patch") {
  std::mt19937 rng(4);
  Tensor input = random_tensor({1, 1, 5, 5}, rng);
  Tensor weight = random_tensor({1, 1, 3, 3}, rng);
  Tensor grad_out({1, 1, 3, 3});
  grad_out[size_t(1 * 3 + 2)] = 1.0f;  // output position (1,2)
  Conv2dGrads g = conv2d_backward(grad_out, input, weight, 1, 0);
  for (int64_t ky = 0; ky < 3; ++ky)
    for (int64_t kx = 0; kx < 3; ++kx)
      CHECK(g.grad_weight[size_t(ky * 3 + kx)] ==
            input[size_t((1 + ky) * 5 + (2 + kx))]);
}

TEST_CASE("conv2d backward passes central finite differences") {
  std::mt19937 rng(5);
  const float h = 1e-3f;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int64_t> ch(1, 2), sz(3, 5);
    const int64_t c = ch(rng), f = ch(rng), hh = sz(rng), ww = sz(rng);
    Tensor input = random_tensor({1, c, hh, ww}, rng);
    Tensor weight = random_tensor({f, c, 3, 3}, rng);
    Tensor bias = random_tensor({f}, rng);
    const Tensor out = conv2d_forward(input, weight, bias, 1, 1);
    Tensor ones(out.shape);
    ones.fill(1.0f);
    Conv2dGrads g = conv2d_backward(ones, input, weight, 1, 1);

    auto fd_check = [&](Tensor& param, const Tensor& grad) {
      std::uniform_int_distribution<size_t> pick(0, param.data.size() - 1);
      const size_t i = pick(rng);
      const float keep = param[i];
      param[i] = keep + h;
      const double up = sum_all(conv2d_forward(input, weight, bias, 1, 1));
      param[i] = keep - h;
      const double dn = sum_all(conv2d_forward(input, weight, bias, 1, 1));
      param[i] = keep;
      CHECK(rel_close((up - dn) / (2.0 * double(h)), double(grad[i]), 1e-3));
    };
    fd_check(input, g.grad_input);
    fd_check(weight, g.grad_weight);
    fd_check(bias, g.grad_bias);
  }
}

TEST_CASE("maxpool2d basics") {
  Tensor input({1, 1, 2, 2}, {1.0f, 2.0f, 3.0f, 4.0f});
  PoolResult r = maxpool2d(input, 2, 2);
  CHECK(r.output.numel() == 1);
  CHECK(r.output[0] == 4.0f);
  CHECK(r.argmax[0] == 3);  // row-major position (1,1)

  Tensor flat({1, 1, 4, 4});
  flat.fill(0.5f);
  PoolResult tie = maxpool2d(flat, 2, 2);
  // First-wins tie-break: each window keeps its top-left element.
  CHECK(tie.argmax == std::vector<int64_t>{0, 2, 8, 10});

  CHECK_THROWS_AS(maxpool2d(input, 3, 1), Error);
}

TEST_CASE("maxpool2d matches a window-scan oracle and routes gradients") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    Tensor input = random_tensor({1, 2, 4, 4}, rng);
    PoolResult r = maxpool2d(input, 2, 2);
    for (int64_t c = 0; c < 2; ++c)
      for (int64_t oy = 0; oy < 2; ++oy)
        for (int64_t ox = 0; ox < 2; ++ox) {
          float best = -1e30f;
          for (int64_t ky = 0; ky < 2; ++ky)
            for (int64_t kx = 0; kx < 2; ++kx)
              best = std::max(best,
                              input[size_t(c * 16 + (oy * 2 + ky) * 4 +
                                           (ox * 2 + kx))]);
          CHECK(r.output[size_t(c * 4 + oy * 2 + ox)] == best);
        }
    // Backward scatters each output grad to its argmax position.
    Tensor go = random_tensor(r.output.shape, rng);
    Tensor gi = maxpool2d_backward(go, r.argmax, input.shape);
    double total_go = 0, total_gi = 0;
    for (float v : go.data) total_go += v;
    for (float v : gi.data) total_gi += v;
    CHECK(rel_close(total_go, total_gi, 1e-6));
  }
}

TEST_CASE("fc forward examples") {
  {
    Tensor input({2, 3}, {1, 2, 3, 4, 5, 6});
    Tensor eye({3, 3});
    for (int i = 0; i < 3; ++i) eye[size_t(i * 3 + i)] = 1.0f;
    Tensor bias({3});
    CHECK(testing::exactly_eq(fc_forward(input, eye, bias), input));
  }
  {
    Tensor input({1, 2}, {1.0f, 2.0f});
    Tensor weight({1, 2}, {3.0f, 4.0f});
    Tensor bias({1}, {5.0f});
    Tensor out = fc_forward(input, weight, bias);
    CHECK(out[0] == doctest::Approx(16.0f));
  }
  CHECK_THROWS_AS(fc_forward(Tensor({1, 2}), Tensor({1, 3}), Tensor({1})),
                  Error);
}

TEST_CASE("fc backward passes central finite differences") {
  std::mt19937 rng(7);
  const float h = 1e-3f;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int64_t> dim(1, 6);
    const int64_t n = dim(rng), fin = dim(rng), fout = dim(rng);
    Tensor input = random_tensor({n, fin}, rng);
    Tensor weight = random_tensor({fout, fin}, rng);
    Tensor bias = random_tensor({fout}, rng);
    Tensor ones({n, fout});
    ones.fill(1.0f);
    FcGrads g = fc_backward(ones, input, weight);

    auto fd_check = [&](Tensor& param, const Tensor& grad) {
      std::uniform_int_distribution<size_t> pick(0, param.data.size() - 1);
      const size_t i = pick(rng);
      const float keep = param[i];
      param[i] = keep + h;
      const double up = sum_all(fc_forward(input, weight, bias));
      param[i] = keep - h;
      const double dn = sum_all(fc_forward(input, weight, bias));
      param[i] = keep;
      CHECK(rel_close((up - dn) / (2.0 * double(h)), double(grad[i]), 1e-3));
    };
    fd_check(input, g.grad_input);
    fd_check(weight, g.grad_weight);
    // Bias gradient of the sum-loss is the batch size.
    for (float v : g.grad_bias.data) CHECK(v == doctest::Approx(float(n)));
  }
}

TEST_CASE("softmax cross-entropy examples") {
  {
    Tensor logits({2, 4});
    logits.fill(0.3f);
    XentResult r = softmax_xent(logits, {1, 3});
    CHECK(double(r.loss) == doctest::Approx(std::log(4.0)).epsilon(1e-6));
  }
  {
    Tensor logits({1, 3}, {50.0f, -10.0f, -10.0f});
    XentResult r = softmax_xent(logits, {0});
    CHECK(r.loss < 1e-6f);
  }
  CHECK_THROWS_AS(softmax_xent(Tensor({1, 3}), {3}), Error);
  CHECK_THROWS_AS(softmax_xent(Tensor({1, 3}), {-1}), Error);
}

TEST_CASE("softmax cross-entropy gradient matches finite differences") {
  std::mt19937 rng(8);
  const float h = 1e-3f;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int64_t> dim(2, 6);
    const int64_t n = dim(rng), k = dim(rng);
    Tensor logits = random_tensor({n, k}, rng);
    std::vector<int> labels(static_cast<size_t>(n));
    std::uniform_int_distribution<int> lab(0, int(k) - 1);
    for (int& l : labels) l = lab(rng);
    XentResult r = softmax_xent(logits, labels);
    std::uniform_int_distribution<size_t> pick(0, logits.data.size() - 1);
    const size_t i = pick(rng);
    const float keep = logits[i];
    logits[i] = keep + h;
    const double up = softmax_xent(logits, labels).loss;
    logits[i] = keep - h;
    const double dn = softmax_xent(logits, labels).loss;
    logits[i] = keep;
    CHECK(rel_close((up - dn) / (2.0 * double(h)), double(r.grad_logits[i]),
                    1e-4));
  }
}

TEST_CASE("adam: zero gradient leaves fresh parameters unchanged") {
  GradPair p(Tensor({4}, {1.0f, -2.0f, 3.0f, 0.5f}));
  Tensor m({4}), v({4});
  const Tensor before = p.value;
  adam_step(p, m, v, 1, AdamConfig{});
  CHECK(testing::exactly_eq(p.value, before));
}

TEST_CASE("adam: one step moves by roughly lr*sign(g)") {
  AdamConfig cfg;
  GradPair p(Tensor({2}, {0.0f, 0.0f}));
  p.grad = Tensor({2}, {0.7f, -1.3f});
  Tensor m({2}), v({2});
  adam_step(p, m, v, 1, cfg);
  CHECK(double(p.value[0]) == doctest::Approx(-cfg.lr).epsilon(1e-4));
  CHECK(double(p.value[1]) == doctest::Approx(cfg.lr).epsilon(1e-4));
}

TEST_CASE("adam: two steps match a hand-rolled trace") {
  const double lr = 0.001, b1 = 0.9, b2 = 0.999, eps = 1e-8, g = 0.25;
  double w = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 2; ++t) {
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mhat = m / (1 - std::pow(b1, t));
    const double vhat = v / (1 - std::pow(b2, t));
    w -= lr * mhat / (std::sqrt(vhat) + eps);
  }
  GradPair p(Tensor({1}, {1.0f}));
  p.grad = Tensor({1}, {0.25f});
  Tensor mm({1}), vv({1});
  adam_step(p, mm, vv, 1, AdamConfig{});
  adam_step(p, mm, vv, 2, AdamConfig{});
  CHECK(double(p.value[0]) == doctest::Approx(w).epsilon(1e-5));
}

TEST_CASE("adam aborts on non-finite gradients") {
  GradPair p(Tensor({1}, {1.0f}));
  p.grad = Tensor({1}, {std::numeric_limits<float>::quiet_NaN()});
  Tensor m({1}), v({1});
  CHECK_THROWS_AS(adam_step(p, m, v, 1, AdamConfig{}), Error);
}

TEST_CASE("ops are deterministic") {
  std::mt19937 rng(9);
  Tensor input = random_tensor({2, 2, 6, 6}, rng);
  Tensor weight = random_tensor({3, 2, 3, 3}, rng);
  Tensor bias = random_tensor({3}, rng);
  const Tensor a = conv2d_forward(input, weight, bias, 1, 1);
  const Tensor b = conv2d_forward(input, weight, bias, 1, 1);
  CHECK(testing::exactly_eq(a, b));
}
