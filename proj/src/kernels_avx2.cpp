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

// AVX2 kernel variants. This translation unit is compiled with -mavx2 and
// must only be entered after a runtime cpuid check (see kernels.cpp).
// Elementwise kernels mirror the scalar operation order exactly (mul+add,
// no FMA) so results are bit-identical to the reference.

#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "snn2ann/kernels.hpp"

namespace s2a {
namespace {

float hsum256(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 0x55));
  return _mm_cvtss_f32(s);
}

float dot_avx2(const float* a, const float* b, size_t n) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(a + i);
    __m256 vb = _mm256_loadu_ps(b + i);
    acc = _mm256_add_ps(acc, _mm256_mul_ps(va, vb));
  }
  float out = hsum256(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void axpy_avx2(float alpha, const float* x, float* y, size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vx = _mm256_loadu_ps(x + i);
    __m256 vy = _mm256_loadu_ps(y + i);
    _mm256_storeu_ps(y + i, _mm256_add_ps(vy, _mm256_mul_ps(va, vx)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(float alpha, float* x, size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), va));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

float sum_avx2(const float* x, size_t n) {
  __m256 acc = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
  }
  float out = hsum256(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

void relu_avx2(const float* x, float* y, size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void if_step_hard_avx2(float* u, float* spikes, const float* input, float vth,
                       size_t n) {
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 vt = _mm256_set1_ps(vth);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vu = _mm256_loadu_ps(u + i);
    __m256 vs = _mm256_loadu_ps(spikes + i);
    __m256 vin = _mm256_loadu_ps(input + i);
    __m256 un =
        _mm256_add_ps(_mm256_mul_ps(vu, _mm256_sub_ps(one, vs)), vin);
    __m256 fired = _mm256_cmp_ps(un, vt, _CMP_GT_OQ);
    _mm256_storeu_ps(u + i, un);
    _mm256_storeu_ps(spikes + i, _mm256_and_ps(fired, one));
  }
  for (; i < n; ++i) {
    const float un = u[i] * (1.0f - spikes[i]) + input[i];
    u[i] = un;
    spikes[i] = un > vth ? 1.0f : 0.0f;
  }
}

void if_step_soft_avx2(float* u, float* spikes, const float* input, float vth,
                       size_t n) {
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 vt = _mm256_set1_ps(vth);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_add_ps(_mm256_loadu_ps(u + i), _mm256_loadu_ps(input + i));
    __m256 fired = _mm256_cmp_ps(v, vt, _CMP_GT_OQ);
    __m256 o = _mm256_and_ps(fired, one);
    _mm256_storeu_ps(u + i, _mm256_sub_ps(v, _mm256_mul_ps(o, vt)));
    _mm256_storeu_ps(spikes + i, o);
  }
  for (; i < n; ++i) {
    const float v = u[i] + input[i];
    const float o = v > vth ? 1.0f : 0.0f;
    u[i] = v - o * vth;
    spikes[i] = o;
  }
}

void adam_avx2(float* w, const float* g, float* m, float* v, size_t n,
               const AdamScalars& s) {
  const __m256 b1 = _mm256_set1_ps(s.beta1);
  const __m256 b2 = _mm256_set1_ps(s.beta2);
  const __m256 c1 = _mm256_set1_ps(1.0f - s.beta1);
  const __m256 c2 = _mm256_set1_ps(1.0f - s.beta2);
  const __m256 vb1 = _mm256_set1_ps(s.bias1);
  const __m256 vb2 = _mm256_set1_ps(s.bias2);
  const __m256 lr = _mm256_set1_ps(s.lr);
  const __m256 eps = _mm256_set1_ps(s.eps);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vg = _mm256_loadu_ps(g + i);
    __m256 vm = _mm256_add_ps(_mm256_mul_ps(b1, _mm256_loadu_ps(m + i)),
                              _mm256_mul_ps(c1, vg));
    __m256 vv = _mm256_add_ps(_mm256_mul_ps(b2, _mm256_loadu_ps(v + i)),
                              _mm256_mul_ps(c2, _mm256_mul_ps(vg, vg)));
    _mm256_storeu_ps(m + i, vm);
    _mm256_storeu_ps(v + i, vv);
    __m256 mhat = _mm256_div_ps(vm, vb1);
    __m256 vhat = _mm256_div_ps(vv, vb2);
    __m256 den = _mm256_add_ps(_mm256_sqrt_ps(vhat), eps);
    __m256 upd = _mm256_mul_ps(lr, _mm256_div_ps(mhat, den));
    _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), upd));
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

extern const KernelTable kAvx2Kernels;
const KernelTable kAvx2Kernels = {
    "avx2",           dot_avx2,          axpy_avx2,
    scale_avx2,       sum_avx2,          relu_avx2,
    if_step_hard_avx2, if_step_soft_avx2, adam_avx2,
};

}  // namespace s2a

#endif  // x86
