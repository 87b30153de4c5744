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

#include "snn2ann/mapping.hpp"

namespace s2a {

const char* mapping_name(MappingKind k) {
  return k == MappingKind::kReSU ? "resu" : "stsu";
}

MappingKind mapping_from_name(const std::string& name) {
  if (name == "resu") return MappingKind::kReSU;
  if (name == "stsu") return MappingKind::kSTSU;
  S2A_CHECK(false, "unknown mapping unit '" << name << "'");
  return MappingKind::kSTSU;
}

Tensor resu_forward(const Tensor& relu_out, const Tensor& counts) {
  S2A_CHECK(relu_out.same_shape(counts),
            "resu shape mismatch: relu " << shape_str(relu_out.shape)
                << " vs counts " << shape_str(counts.shape));
  Tensor out(counts.shape);
  for (size_t i = 0; i < out.data.size(); ++i) {
    S2A_CHECK(relu_out[i] >= 0.0f, "resu expects nonnegative relu output");
    out[i] = relu_out[i] > 0.0f ? counts[i] : 0.0f;
  }
  return out;
}

Tensor stsu_forward(const Tensor& relu_out, const Tensor& counts) {
  S2A_CHECK(relu_out.same_shape(counts),
            "stsu shape mismatch: relu " << shape_str(relu_out.shape)
                << " vs counts " << shape_str(counts.shape));
  return counts;
}

Tensor resu_backward(const Tensor& grad_xq) { return grad_xq; }
Tensor stsu_backward(const Tensor& grad_xq) { return grad_xq; }

Tensor MappingUnit::forward(const Tensor& relu_out, const Tensor& counts) {
  cached_relu_ = relu_out;
  cached_counts_ = counts;
  has_forward_ = true;
  return kind_ == MappingKind::kReSU ? resu_forward(relu_out, counts)
                                     : stsu_forward(relu_out, counts);
}

Tensor MappingUnit::backward(const Tensor& grad_xq) const {
  S2A_CHECK(has_forward_, "mapping unit backward called before forward");
  S2A_CHECK(grad_xq.same_shape(cached_relu_),
            "mapping unit backward shape mismatch");
  return kind_ == MappingKind::kReSU ? resu_backward(grad_xq)
                                     : stsu_backward(grad_xq);
}

}  // namespace s2a
