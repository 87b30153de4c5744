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

#ifndef SNN2ANN_DATA_HPP_
#define SNN2ANN_DATA_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snn2ann/tensor.hpp"

namespace s2a {

struct Dataset {
  Tensor features;  // [N] + sample_dims
  std::vector<int> labels;
  int64_t classes = 0;
  std::vector<int64_t> sample_dims;

  int64_t size() const { return static_cast<int64_t>(labels.size()); }
  Tensor gather(const std::vector<int64_t>& indices) const;
  std::vector<int> gather_labels(const std::vector<int64_t>& indices) const;

  // Deterministic head/tail split.
  std::pair<Dataset, Dataset> split(double train_fraction) const;
};

// IDX image/label pair (big-endian magic 0x803 / 0x801). Pixels are scaled
// to [0,1]; image shape becomes [N,1,H,W].
Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path);
// Writes a single-channel dataset back out as an IDX pair (pixels quantized
// to bytes).
void write_idx(const Dataset& ds, const std::string& images_path,
               const std::string& labels_path);

// Gaussian blobs on a circle: linearly separable, 2 features. Labels are
// assigned round-robin so n == classes gives one sample per class.
Dataset synth_blobs(int64_t n, int64_t classes, uint64_t seed);

// Two concentric rings (2 classes, not linearly separable).
Dataset synth_two_rings(int64_t n, uint64_t seed);

// Synthetic single-channel images with class-specific stroke patterns plus
// background noise; the desk-scale stand-in for an image benchmark.
Dataset synth_images(int64_t n, int64_t classes, uint64_t seed, int64_t h,
                     int64_t w);

}  // namespace s2a

#endif  // SNN2ANN_DATA_HPP_
