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

#include "snn2ann/batchnorm.hpp"

#include <cmath>

#include "snn2ann/kernels.hpp"

namespace s2a {

namespace {

// Iterates a [N,C,...] tensor channel by channel. fn(channel, flat_index).
template <typename Fn>
void for_each_channel(const std::vector<int64_t>& shape, Fn&& fn) {
  S2A_CHECK(shape.size() == 2 || shape.size() == 4,
            "batch-norm expects [N,F] or [N,C,H,W], got " << shape_str(shape));
  const int64_t n = shape[0];
  const int64_t c = shape[1];
  const int64_t inner = shape.size() == 4 ? shape[2] * shape[3] : 1;
  for (int64_t ni = 0; ni < n; ++ni) {
    for (int64_t ci = 0; ci < c; ++ci) {
      const int64_t base = (ni * c + ci) * inner;
      for (int64_t i = 0; i < inner; ++i) fn(ci, base + i);
    }
  }
}

int64_t channel_count(const std::vector<int64_t>& shape) {
  S2A_CHECK(shape.size() == 2 || shape.size() == 4,
            "batch-norm expects [N,F] or [N,C,H,W], got " << shape_str(shape));
  return shape[1];
}

}  // namespace

BnState::BnState(int64_t channels, float alpha_, float eps_) {
  S2A_CHECK(channels >= 1, "batch-norm needs at least one channel");
  S2A_CHECK(eps_ > 0.0f, "batch-norm eps must be positive");
  Tensor ones({channels});
  ones.fill(1.0f);
  gamma = GradPair(ones);
  beta = GradPair(Tensor({channels}));
  mu_ema = Tensor({channels});
  sigma_ema = ones;
  alpha = alpha_;
  eps = eps_;
}

FoldedParams fold_weights(const Tensor& weight, const Tensor& bias,
                          const BnState& bn, int64_t time_steps) {
  S2A_CHECK(time_steps >= 1, "fold_weights requires T >= 1");
  const int64_t channels = bn.channels();
  S2A_CHECK(weight.shape[0] == channels && bias.numel() == channels,
            "fold_weights: weight/bias rows do not match BN channels");
  const int64_t row = weight.numel() / channels;
  FoldedParams f;
  f.weight = weight;
  f.bias = Tensor({channels});
  const float t = float(time_steps);
  for (int64_t c = 0; c < channels; ++c) {
    const float sigma2 = bn.sigma_ema[size_t(c)] * bn.sigma_ema[size_t(c)];
    const float denom = std::sqrt(sigma2 + bn.eps);
    S2A_CHECK(denom > 0.0f, "batch-norm denominator must be positive");
    const float g = bn.gamma.value[size_t(c)];
    kernels().scale(g / denom, f.weight.ptr() + c * row, size_t(row));
    f.bias[size_t(c)] = g * (bias[size_t(c)] - bn.mu_ema[size_t(c)]) /
                            (t * denom) +
                        bn.beta.value[size_t(c)] / t;
  }
  return f;
}

void update_ema(BnState& bn, const Tensor& batch_mu,
                const Tensor& batch_sigma) {
  S2A_CHECK(batch_mu.numel() == bn.channels() &&
                batch_sigma.numel() == bn.channels(),
            "EMA update channel mismatch");
  batch_mu.check_finite("batch mean");
  batch_sigma.check_finite("batch std");
  for (size_t c = 0; c < size_t(bn.channels()); ++c) {
    bn.mu_ema[c] = (1.0f - bn.alpha) * bn.mu_ema[c] + bn.alpha * batch_mu[c];
    bn.sigma_ema[c] =
        (1.0f - bn.alpha) * bn.sigma_ema[c] + bn.alpha * batch_sigma[c];
  }
}

BatchStats batch_stats(const Tensor& pre) {
  const int64_t channels = channel_count(pre.shape);
  const int64_t per_channel = pre.numel() / channels;
  S2A_CHECK(per_channel > 0, "batch_stats on empty tensor");
  std::vector<double> sum(size_t(channels), 0.0);
  std::vector<double> sum2(size_t(channels), 0.0);
  for_each_channel(pre.shape, [&](int64_t c, int64_t i) {
    const double v = pre[size_t(i)];
    sum[size_t(c)] += v;
    sum2[size_t(c)] += v * v;
  });
  BatchStats s;
  s.mu = Tensor({channels});
  s.sigma = Tensor({channels});
  for (int64_t c = 0; c < channels; ++c) {
    const double mean = sum[size_t(c)] / double(per_channel);
    const double var =
        std::max(0.0, sum2[size_t(c)] / double(per_channel) - mean * mean);
    s.mu[size_t(c)] = float(mean);
    s.sigma[size_t(c)] = float(std::sqrt(var));
  }
  return s;
}

Tensor bn_apply(const Tensor& pre, const BnState& bn) {
  S2A_CHECK(channel_count(pre.shape) == bn.channels(),
            "bn_apply channel mismatch");
  Tensor out(pre.shape);
  std::vector<float> scale(size_t(bn.channels()));
  std::vector<float> shift(size_t(bn.channels()));
  for (size_t c = 0; c < scale.size(); ++c) {
    const float denom =
        std::sqrt(bn.sigma_ema[c] * bn.sigma_ema[c] + bn.eps);
    scale[c] = bn.gamma.value[c] / denom;
    shift[c] = bn.beta.value[c] - bn.mu_ema[c] * scale[c];
  }
  for_each_channel(pre.shape, [&](int64_t c, int64_t i) {
    out[size_t(i)] = pre[size_t(i)] * scale[size_t(c)] + shift[size_t(c)];
  });
  return out;
}

BnGrads bn_backward(const Tensor& grad_out, const Tensor& pre,
                    const BnState& bn) {
  S2A_CHECK(grad_out.same_shape(pre), "bn_backward shape mismatch");
  const int64_t channels = bn.channels();
  BnGrads g;
  g.grad_pre = Tensor(pre.shape);
  g.grad_gamma = Tensor({channels});
  g.grad_beta = Tensor({channels});
  std::vector<float> inv(static_cast<size_t>(channels));
  for (size_t c = 0; c < inv.size(); ++c) {
    inv[c] = 1.0f / std::sqrt(bn.sigma_ema[c] * bn.sigma_ema[c] + bn.eps);
  }
  for_each_channel(pre.shape, [&](int64_t c, int64_t i) {
    const size_t ci = size_t(c), ii = size_t(i);
    g.grad_pre[ii] = grad_out[ii] * bn.gamma.value[ci] * inv[ci];
    g.grad_gamma[ci] +=
        grad_out[ii] * (pre[ii] - bn.mu_ema[ci]) * inv[ci];
    g.grad_beta[ci] += grad_out[ii];
  });
  return g;
}

}  // namespace s2a
