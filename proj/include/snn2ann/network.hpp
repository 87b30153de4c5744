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

#ifndef SNN2ANN_NETWORK_HPP_
#define SNN2ANN_NETWORK_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "snn2ann/batchnorm.hpp"
#include "snn2ann/mapping.hpp"
#include "snn2ann/tensor.hpp"

namespace s2a {

enum class LayerKind { kConv, kMaxPool, kFC };

struct LayerSpec {
  LayerKind kind = LayerKind::kFC;
  int64_t k = 0;       // kernel size (conv / pool)
  int64_t out = 0;     // conv output channels / fc output features
  int64_t stride = 1;
  int64_t pad = 0;
};

// Declarative architecture. The arch string uses the compact notation
//   k3c16s1p1-M2-k3c32s1p1-M2-FC10
// conv: k<size>c<channels>[s<stride>][p<pad>]; pool: M<size>[s<stride>]
// (stride defaults to the window); fc: FC<features>. The final layer must be
// FC: it is the classifier and consumes accumulated spikes, outside the
// spiking dynamics. A pool entry binds to the convolution directly before it
// (the SNN branch pools the per-step convolution output).
struct NetworkSpec {
  std::vector<LayerSpec> layers;
  std::vector<int64_t> input_dims;  // {C,H,W} for images, {F} for features
  MappingKind mapping = MappingKind::kSTSU;
  int64_t time_steps = 4;

  void validate() const;
  std::string arch_string() const;

  static std::vector<LayerSpec> parse_arch(const std::string& arch);
  static std::string format_arch(const std::vector<LayerSpec>& layers);
};

// One weight-shared spiking encoder layer. Both branches read the same
// weight/bias store; the SNN branch additionally folds BN into per-step
// parameters and fires through the IF threshold vth.
struct SharedLayer {
  bool is_conv = false;
  int64_t k = 0, stride = 1, pad = 0;  // conv geometry
  GradPair weight;
  GradPair bias;
  BnState bn;
  float vth = 1.0f;

  bool has_pool = false;
  int64_t pool_k = 0, pool_stride = 0;

  std::vector<int64_t> in_dims;   // per-sample input dims
  std::vector<int64_t> pre_dims;  // post-affine dims
  std::vector<int64_t> out_dims;  // post-pool dims (IF / mapping shape)
  int64_t neurons = 0;            // product(out_dims)
};

struct VthInit {
  bool uniform = true;  // draw from U(0,1) per layer
  float fixed = 1.0f;   // used when !uniform
};

struct Network {
  NetworkSpec spec;
  std::vector<SharedLayer> layers;  // spiking encoder stations
  GradPair cls_weight;              // classifier [classes, cls_in]
  GradPair cls_bias;
  int64_t cls_in = 0;
  int64_t classes = 0;

  // Builds parameters from the spec. All draws come from rng in a fixed
  // order, so identical seeds give identical networks.
  static Network build(const NetworkSpec& spec, std::mt19937& rng,
                       const VthInit& vth, float bn_alpha, float bn_eps);

  std::vector<GradPair*> trainable_params(bool include_bn);
  std::vector<std::string> trainable_names(bool include_bn) const;

  // The affine map of station idx applied to a batch, with explicit
  // parameters (raw for the ANN branch, folded for the SNN branch). Conv
  // input must be [N,C,H,W]; fc input is flattened to [N,F] if needed.
  Tensor station_affine(size_t idx, const Tensor& weight, const Tensor& bias,
                        const Tensor& input) const;
};

// Flattens [N, d...] to [N, prod(d)].
Tensor flatten2d(const Tensor& x);
// Prepends the batch dimension to per-sample dims.
std::vector<int64_t> batch_dims(int64_t n, const std::vector<int64_t>& sample);

}  // namespace s2a

#endif  // SNN2ANN_NETWORK_HPP_
