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

#ifndef SNN2ANN_TESTS_TEST_UTIL_HPP_
#define SNN2ANN_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <random>

#include "snn2ann/tensor.hpp"

namespace s2a::testing {

inline Tensor random_tensor(std::vector<int64_t> shape, std::mt19937& rng,
                            float lo = -1.0f, float hi = 1.0f) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& v : t.data) v = dist(rng);
  return t;
}

// |a-b| <= tol * max(1, |a|, |b|): relative comparison with an absolute
// floor so near-zero values do not blow up the ratio.
inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

inline bool approx_eq(const Tensor& a, const Tensor& b, float atol,
                      float rtol) {
  if (!a.same_shape(b)) return false;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const float diff = std::fabs(a[i] - b[i]);
    if (diff > atol + rtol * std::fabs(b[i])) return false;
  }
  return true;
}

inline bool exactly_eq(const Tensor& a, const Tensor& b) {
  return a.shape == b.shape && a.data == b.data;
}

}  // namespace s2a::testing

#endif  // SNN2ANN_TESTS_TEST_UTIL_HPP_
