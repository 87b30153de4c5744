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

// NEON kernel variants for aarch64. Same operation order as the scalar
// reference (mul+add, no fused multiply-add) so elementwise kernels stay
// bit-identical.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "snn2ann/kernels.hpp"

namespace s2a {
namespace {

float dot_neon(const float* a, const float* b, size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = vaddq_f32(acc, vmulq_f32(vld1q_f32(a + i), vld1q_f32(b + i)));
  }
  float out = vaddvq_f32(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void axpy_neon(float alpha, const float* x, float* y, size_t n) {
  const float32x4_t va = vdupq_n_f32(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(y + i, vaddq_f32(vld1q_f32(y + i),
                               vmulq_f32(va, vld1q_f32(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_neon(float alpha, float* x, size_t n) {
  const float32x4_t va = vdupq_n_f32(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(x + i, vmulq_f32(vld1q_f32(x + i), va));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

float sum_neon(const float* x, size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = vaddq_f32(acc, vld1q_f32(x + i));
  float out = vaddvq_f32(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

void relu_neon(const float* x, float* y, size_t n) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(y + i, vmaxq_f32(vld1q_f32(x + i), zero));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void if_step_hard_neon(float* u, float* spikes, const float* input, float vth,
                       size_t n) {
  const float32x4_t one = vdupq_n_f32(1.0f);
  const float32x4_t vt = vdupq_n_f32(vth);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t vu = vld1q_f32(u + i);
    float32x4_t vs = vld1q_f32(spikes + i);
    float32x4_t vin = vld1q_f32(input + i);
    float32x4_t un = vaddq_f32(vmulq_f32(vu, vsubq_f32(one, vs)), vin);
    uint32x4_t fired = vcgtq_f32(un, vt);
    vst1q_f32(u + i, un);
    vst1q_f32(spikes + i,
              vbslq_f32(fired, one, vdupq_n_f32(0.0f)));
  }
  for (; i < n; ++i) {
    const float un = u[i] * (1.0f - spikes[i]) + input[i];
    u[i] = un;
    spikes[i] = un > vth ? 1.0f : 0.0f;
  }
}

void if_step_soft_neon(float* u, float* spikes, const float* input, float vth,
                       size_t n) {
  const float32x4_t one = vdupq_n_f32(1.0f);
  const float32x4_t vt = vdupq_n_f32(vth);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t v = vaddq_f32(vld1q_f32(u + i), vld1q_f32(input + i));
    uint32x4_t fired = vcgtq_f32(v, vt);
    float32x4_t o = vbslq_f32(fired, one, vdupq_n_f32(0.0f));
    vst1q_f32(u + i, vsubq_f32(v, vmulq_f32(o, vt)));
    vst1q_f32(spikes + i, o);
  }
  for (; i < n; ++i) {
    const float v = u[i] + input[i];
    const float o = v > vth ? 1.0f : 0.0f;
    u[i] = v - o * vth;
    spikes[i] = o;
  }
}

void adam_neon(float* w, const float* g, float* m, float* v, size_t n,
               const AdamScalars& s) {
  const float32x4_t b1 = vdupq_n_f32(s.beta1);
  const float32x4_t b2 = vdupq_n_f32(s.beta2);
  const float32x4_t c1 = vdupq_n_f32(1.0f - s.beta1);
  const float32x4_t c2 = vdupq_n_f32(1.0f - s.beta2);
  const float32x4_t vb1 = vdupq_n_f32(s.bias1);
  const float32x4_t vb2 = vdupq_n_f32(s.bias2);
  const float32x4_t lr = vdupq_n_f32(s.lr);
  const float32x4_t eps = vdupq_n_f32(s.eps);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t vg = vld1q_f32(g + i);
    float32x4_t vm =
        vaddq_f32(vmulq_f32(b1, vld1q_f32(m + i)), vmulq_f32(c1, vg));
    float32x4_t vv = vaddq_f32(vmulq_f32(b2, vld1q_f32(v + i)),
                               vmulq_f32(c2, vmulq_f32(vg, vg)));
    vst1q_f32(m + i, vm);
    vst1q_f32(v + i, vv);
    float32x4_t mhat = vdivq_f32(vm, vb1);
    float32x4_t vhat = vdivq_f32(vv, vb2);
    float32x4_t den = vaddq_f32(vsqrtq_f32(vhat), eps);
    float32x4_t upd = vmulq_f32(lr, vdivq_f32(mhat, den));
    vst1q_f32(w + i, vsubq_f32(vld1q_f32(w + i), upd));
  }
  for (; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0f - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0f - s.beta2) * (g[i] * g[i]);
    const float mhat = m[i] / s.bias1;
    const float vhat = v[i] / s.bias2;
    w[i] -= s.lr * (mhat / (std::sqrt(vhat) + s.eps));
  }
}

}  // namespace

extern const KernelTable kNeonKernels;
const KernelTable kNeonKernels = {
    "neon",           dot_neon,          axpy_neon,
    scale_neon,       sum_neon,          relu_neon,
    if_step_hard_neon, if_step_soft_neon, adam_neon,
};

}  // namespace s2a

#endif  // __aarch64__
