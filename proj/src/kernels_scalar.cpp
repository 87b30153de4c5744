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

// Scalar reference kernels. Every SIMD variant is tested against these.

#include <cmath>
#include <cstddef>

#include "snn2ann/kernels.hpp"

namespace s2a {
namespace {

float dot_scalar(const float* a, const float* b, size_t n) {
  float acc = 0.0f;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(float alpha, float* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

float sum_scalar(const float* x, size_t n) {
  float acc = 0.0f;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void relu_scalar(const float* x, float* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void if_step_hard_scalar(float* u, float* spikes, const float* input,
                         float vth, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const float un = u[i] * (1.0f - spikes[i]) + input[i];
    u[i] = un;
    spikes[i] = un > vth ? 1.0f : 0.0f;
  }
}

void if_step_soft_scalar(float* u, float* spikes, const float* input,
                         float vth, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const float v = u[i] + input[i];
    const float o = v > vth ? 1.0f : 0.0f;
    u[i] = v - o * vth;
    spikes[i] = o;
  }
}

void adam_scalar(float* w, const float* g, float* m, float* v, size_t n,
                 const AdamScalars& s) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0f - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0f - s.beta2) * (g[i] * g[i]);
    const float mhat = m[i] / s.bias1;
    const float vhat = v[i] / s.bias2;
    w[i] -= s.lr * (mhat / (std::sqrt(vhat) + s.eps));
  }
}

}  // namespace

extern const KernelTable kScalarKernels;
const KernelTable kScalarKernels = {
    "scalar",          dot_scalar,         axpy_scalar,
    scale_scalar,      sum_scalar,         relu_scalar,
    if_step_hard_scalar, if_step_soft_scalar, adam_scalar,
};

}  // namespace s2a
