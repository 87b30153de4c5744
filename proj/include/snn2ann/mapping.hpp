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

#ifndef SNN2ANN_MAPPING_HPP_
#define SNN2ANN_MAPPING_HPP_

#include <string>

#include "snn2ann/tensor.hpp"

namespace s2a {

// Spiking mapping units: place accumulated spike counts onto the ANN branch
// in the forward pass and pass gradients straight through to the ReLU output
// (the count path carries no gradient).
enum class MappingKind { kReSU, kSTSU };

const char* mapping_name(MappingKind k);
MappingKind mapping_from_name(const std::string& name);

// ReSU: x_q = 1[relu_out > 0] * counts. Positions the ANN leaves inactive
// mask their spikes to zero, filtering noisy spikes out of the training
// signal.
Tensor resu_forward(const Tensor& relu_out, const Tensor& counts);

// STSU: x_q = counts + relu_out - c with c frozen at the value of relu_out,
// so the output numerically equals counts; the relu term exists only as the
// gradient path. Computed exactly (counts returned directly) to avoid
// floating-point residue.
Tensor stsu_forward(const Tensor& relu_out, const Tensor& counts);

// Both backward maps are the straight-through identity on the upstream
// gradient.
Tensor resu_backward(const Tensor& grad_xq);
Tensor stsu_backward(const Tensor& grad_xq);

// Per-layer unit holding the forward caches for one forward/backward pair.
class MappingUnit {
 public:
  explicit MappingUnit(MappingKind kind) : kind_(kind) {}

  Tensor forward(const Tensor& relu_out, const Tensor& counts);
  Tensor backward(const Tensor& grad_xq) const;

  MappingKind kind() const { return kind_; }
  const Tensor& cached_relu() const { return cached_relu_; }
  const Tensor& cached_counts() const { return cached_counts_; }

 private:
  MappingKind kind_;
  bool has_forward_ = false;
  Tensor cached_relu_;
  Tensor cached_counts_;
};

}  // namespace s2a

#endif  // SNN2ANN_MAPPING_HPP_
