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

#ifndef SNN2ANN_KERNELS_HPP_
#define SNN2ANN_KERNELS_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace s2a {

struct AdamScalars {
  float lr;
  float beta1;
  float beta2;
  float eps;
  float bias1;  // 1 - beta1^t
  float bias2;  // 1 - beta2^t
};

// The data-parallel inner loops. One scalar reference implementation plus
// SIMD variants (AVX2 on x86-64, NEON on aarch64) selected at runtime.
//
// Elementwise kernels (axpy, scale, relu, if_step_*, adam) avoid FMA and
// reassociation so every backend is bit-identical to the scalar reference.
// Reductions (dot, sum) reassociate and are equivalence-tested under a
// tolerance instead.
struct KernelTable {
  const char* name;

  // sum_i a[i]*b[i]
  float (*dot)(const float* a, const float* b, size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(float alpha, const float* x, float* y, size_t n);
  // x[i] *= alpha
  void (*scale)(float alpha, float* x, size_t n);
  // sum_i x[i]
  float (*sum)(const float* x, size_t n);
  // y[i] = max(x[i], 0)
  void (*relu)(const float* x, float* y, size_t n);

  // Hard-reset integrate-and-fire step. On entry u holds the previous
  // pre-reset potential and spikes the previous binary output; on exit they
  // hold the new potential and spike map.
  //   u <- u*(1-spikes) + input;  spikes <- (u > vth)
  void (*if_step_hard)(float* u, float* spikes, const float* input, float vth,
                       size_t n);
  // Soft-reset (subtraction) step with the pending reset applied at spike
  // time, so the stored potential is already settled:
  //   v = u + input;  spikes <- (v > vth);  u <- v - spikes*vth
  void (*if_step_soft)(float* u, float* spikes, const float* input, float vth,
                       size_t n);

  // Bias-corrected Adam update of w given gradient g and moments m, v.
  void (*adam)(float* w, const float* g, float* m, float* v, size_t n,
               const AdamScalars& s);
};

enum class KernelBackend { kScalar, kAvx2, kNeon };

const char* backend_name(KernelBackend b);
std::vector<KernelBackend> available_backends();

// Active table. Resolved once: the SNN2ANN_KERNELS env var ("scalar",
// "avx2", "neon") wins, otherwise the widest backend this CPU supports.
const KernelTable& kernels();

// Forces a backend (tests). Throws if it is not available on this machine.
void set_kernel_backend(KernelBackend b);
const KernelTable& kernel_table(KernelBackend b);

}  // namespace s2a

#endif  // SNN2ANN_KERNELS_HPP_
