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

#ifndef SNN2ANN_CONFIG_HPP_
#define SNN2ANN_CONFIG_HPP_

#include <string>

#include "snn2ann/network.hpp"
#include "snn2ann/train.hpp"

namespace s2a {

// Experiment description parsed from a flat sectioned key=value file:
//
//   [dataset]
//   kind = blobs            # blobs | rings | images | idx
//   samples = 500
//   ...
//   [network]
//   arch = FC16-FC3
//   input = 2               # 2 for features, 1x10x10 for C x H x W
//   [train]
//   trainer = s2a-stsu
//   ...
//   [output]
//   dir = out
//
// Unknown sections or keys are rejected. Environment variables prefixed
// SNN2ANN_ (TRAINER, STEPS, EPOCHS, SEED, OUT, NO_ATA) override file values,
// and CLI flags override both.
struct DatasetConfig {
  std::string kind = "blobs";
  int64_t samples = 500;
  int64_t classes = 3;
  int64_t image_h = 10;
  int64_t image_w = 10;
  double train_fraction = 0.8;
  std::string idx_images;
  std::string idx_labels;
};

struct OutputConfig {
  std::string dir = "out";
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::string arch = "FC16-FC3";
  std::string input = "2";
  TrainConfig train;
  OutputConfig output;

  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);

  // Applies SNN2ANN_* environment overrides.
  void apply_env();

  // Serializes every effective key; parse_text(to_text()) round-trips.
  std::string to_text() const;

  NetworkSpec network_spec() const;
  std::vector<int64_t> input_dims() const;
};

}  // namespace s2a

#endif  // SNN2ANN_CONFIG_HPP_
