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

#ifndef SNN2ANN_BATCHNORM_HPP_
#define SNN2ANN_BATCHNORM_HPP_

#include <cstdint>

#include "snn2ann/tensor.hpp"

namespace s2a {

// Per-channel batch-norm state with exponential-moving-average statistics.
// The EMA tracks the standard deviation (not the variance); downstream
// formulas square it. Normalization on the ANN branch and the per-step fold
// on the SNN branch both read the same EMA, which is what keeps the two
// branches consistent.
struct BnState {
  GradPair gamma;    // learnable scale, init 1
  GradPair beta;     // learnable shift, init 0
  Tensor mu_ema;     // EMA of channel means, init 0
  Tensor sigma_ema;  // EMA of channel standard deviations, init 1
  float alpha = 0.1f;  // EMA momentum
  float eps = 1e-5f;   // variance stabilizer

  BnState() = default;
  BnState(int64_t channels, float alpha_, float eps_);

  int64_t channels() const { return gamma.value.numel(); }
};

struct FoldedParams {
  Tensor weight;
  Tensor bias;
};

// Folds BN into per-time-step weights and biases for the SNN branch:
//   W_s[c,:] = gamma[c] * W[c,:] / sqrt(sigma[c]^2 + eps)
//   b_s[c]   = gamma[c] * (b[c] - mu[c]) / (T*sqrt(sigma[c]^2 + eps))
//              + beta[c] / T
// so that summing the folded affine over T steps reproduces the ANN-branch
// BN of the time-summed pre-activation. W's leading dimension is the channel
// count (conv [C_out,C_in,k,k] or fc [F_out,F_in]).
FoldedParams fold_weights(const Tensor& weight, const Tensor& bias,
                          const BnState& bn, int64_t time_steps);

// EMA update toward this batch's statistics:
//   mu    <- (1-alpha)*mu    + alpha*batch_mu
//   sigma <- (1-alpha)*sigma + alpha*batch_sigma
void update_ema(BnState& bn, const Tensor& batch_mu,
                const Tensor& batch_sigma);

struct BatchStats {
  Tensor mu;     // per-channel mean
  Tensor sigma;  // per-channel standard deviation (population)
};

// Per-channel statistics of a pre-activation tensor: [N,C,H,W] reduces over
// N,H,W; [N,F] reduces over N.
BatchStats batch_stats(const Tensor& pre);

// ANN-branch normalization using the EMA statistics:
//   out = gamma*(pre - mu_ema)/sqrt(sigma_ema^2 + eps) + beta, per channel.
Tensor bn_apply(const Tensor& pre, const BnState& bn);

struct BnGrads {
  Tensor grad_pre;
  Tensor grad_gamma;
  Tensor grad_beta;
};

// Adjoint of bn_apply. The EMA statistics are constants, so
//   grad_pre = grad_out * gamma/sqrt(sigma^2+eps)
//   grad_gamma[c] = sum over channel c of grad_out*(pre-mu)/sqrt(sigma^2+eps)
//   grad_beta[c] = sum over channel c of grad_out.
BnGrads bn_backward(const Tensor& grad_out, const Tensor& pre,
                    const BnState& bn);

}  // namespace s2a

#endif  // SNN2ANN_BATCHNORM_HPP_
