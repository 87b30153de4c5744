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

#ifndef SNN2ANN_OPS_HPP_
#define SNN2ANN_OPS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "snn2ann/tensor.hpp"

namespace s2a {

// Differentiable primitives. Pure functions over immutable inputs; the
// backward passes are exact adjoints of the forwards and are hand-wired by
// the trainers (no tape).

struct Conv2dDims {
  int64_t n, c_in, h, w, c_out, k, stride, pad, h_out, w_out;
};

// Validates shapes and computes output dims: h_out = (h + 2p - k)/stride + 1.
Conv2dDims conv2d_dims(const std::vector<int64_t>& input_shape,
                       const std::vector<int64_t>& weight_shape, int64_t stride,
                       int64_t pad);

// Cross-correlation of input [N,C_in,H,W] with weight [C_out,C_in,k,k].
Tensor conv2d_forward(const Tensor& input, const Tensor& weight,
                      const Tensor& bias, int64_t stride, int64_t pad);

struct Conv2dGrads {
  Tensor grad_input;
  Tensor grad_weight;
  Tensor grad_bias;
};
Conv2dGrads conv2d_backward(const Tensor& grad_out, const Tensor& input,
                            const Tensor& weight, int64_t stride, int64_t pad);

struct PoolResult {
  Tensor output;
  // Flat index into the input buffer of each window maximum; ties resolve to
  // the first position in row-major scan so backward routing is
  // deterministic.
  std::vector<int64_t> argmax;
};
PoolResult maxpool2d(const Tensor& input, int64_t k, int64_t stride);
Tensor maxpool2d_backward(const Tensor& grad_out,
                          const std::vector<int64_t>& argmax,
                          const std::vector<int64_t>& input_shape);

// Affine map: input [N,F_in] x weight [F_out,F_in] + bias -> [N,F_out].
Tensor fc_forward(const Tensor& input, const Tensor& weight,
                  const Tensor& bias);

struct FcGrads {
  Tensor grad_input;
  Tensor grad_weight;
  Tensor grad_bias;
};
FcGrads fc_backward(const Tensor& grad_out, const Tensor& input,
                    const Tensor& weight);

Tensor relu(const Tensor& x);
// Masks grad_out by the positions where the forward output was positive.
Tensor relu_backward(const Tensor& grad_out, const Tensor& relu_out);

// dst += src, elementwise.
void accumulate(Tensor& dst, const Tensor& src);

struct XentResult {
  float loss;
  Tensor grad_logits;
};
// Mean cross-entropy over the batch with max-subtracted softmax.
// grad_logits = (softmax - onehot) / N.
XentResult softmax_xent(const Tensor& logits, const std::vector<int>& labels);

struct AdamConfig {
  float lr = 0.001f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps = 1e-8f;
};

// One bias-corrected Adam update (t >= 1) of param.value from param.grad.
// m and v are the running moments, owned by the caller.
void adam_step(GradPair& param, Tensor& m, Tensor& v, int64_t t,
               const AdamConfig& cfg, const std::string& name = "param");

// Owns the moment buffers for a set of parameters and applies adam_step to
// each of them per step.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig cfg) : cfg_(cfg) {}

  void attach(GradPair* param, std::string name);
  void step();
  void zero_grad();

  void set_lr(float lr) { cfg_.lr = lr; }
  float lr() const { return cfg_.lr; }
  int64_t steps_taken() const { return t_; }

 private:
  struct Slot {
    GradPair* param;
    std::string name;
    Tensor m;
    Tensor v;
  };
  AdamConfig cfg_;
  std::vector<Slot> slots_;
  int64_t t_ = 0;
};

}  // namespace s2a

#endif  // SNN2ANN_OPS_HPP_
