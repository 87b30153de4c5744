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

#ifndef SNN2ANN_TENSOR_HPP_
#define SNN2ANN_TENSOR_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "snn2ann/check.hpp"

namespace s2a {

// Dense row-major fp32 tensor. The universal numeric carrier: activations,
// weights, membrane potentials and spike counts all live in one of these.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> s) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(numel_of(shape)), 0.0f);
  }
  Tensor(std::vector<int64_t> s, std::vector<float> d)
      : shape(std::move(s)), data(std::move(d)) {
    S2A_CHECK(static_cast<int64_t>(data.size()) == numel_of(shape),
              "tensor data length does not match shape");
  }

  static int64_t numel_of(const std::vector<int64_t>& s) {
    int64_t n = 1;
    for (int64_t d : s) {
      S2A_CHECK(d >= 0, "negative dimension");
      n *= d;
    }
    return n;
  }

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int64_t dim(size_t i) const {
    S2A_CHECK(i < shape.size(), "dimension index out of range");
    return shape[i];
  }

  float* ptr() { return data.data(); }
  const float* ptr() const { return data.data(); }

  float& operator[](size_t i) { return data[i]; }
  float operator[](size_t i) const { return data[i]; }

  // Reinterprets the buffer under a new shape of equal element count.
  Tensor reshaped(std::vector<int64_t> s) const {
    S2A_CHECK(numel_of(s) == numel(), "reshape changes element count");
    return Tensor(std::move(s), data);
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  void fill(float v) { data.assign(data.size(), v); }

  bool all_finite() const {
    for (float v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
  void check_finite(const std::string& what) const {
    S2A_CHECK(all_finite(), "non-finite values in " << what);
  }

  // True when every entry is an exact small integer; spike counts must be.
  bool is_integral() const {
    for (float v : data) {
      if (v != std::floor(v)) return false;
    }
    return true;
  }
};

inline std::string shape_str(const std::vector<int64_t>& s) {
  std::string out = "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

// A parameter tensor paired with its gradient accumulator.
struct GradPair {
  Tensor value;
  Tensor grad;

  GradPair() = default;
  explicit GradPair(Tensor v) : value(std::move(v)), grad(value.shape) {}

  void zero_grad() { grad.fill(0.0f); }
};

}  // namespace s2a

#endif  // SNN2ANN_TENSOR_HPP_
