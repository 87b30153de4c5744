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

#ifndef SNN2ANN_EXPERIMENT_HPP_
#define SNN2ANN_EXPERIMENT_HPP_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "snn2ann/config.hpp"
#include "snn2ann/data.hpp"
#include "snn2ann/metrics.hpp"
#include "snn2ann/train.hpp"

namespace s2a {

// Builds the dataset an ExperimentConfig describes. Deterministic: the
// generator seed comes from the training seed.
Dataset build_dataset(const ExperimentConfig& cfg);

// Evaluates a trained model on a dataset and assembles the full report:
// accuracy (SNN branch + classifier), per-layer spike and noisy-spike
// accounting, op counts and the energy ratio. For S2A models the ANN branch
// runs alongside to measure noisy spikes; the STBP baseline has no ANN
// reference, so its noise columns are zero.
MetricsReport evaluate_model(const Network& net, TrainerKind kind,
                             int64_t time_steps, const Dataset& eval_set,
                             int64_t batch_size);

struct RunArtifacts {
  MetricsReport metrics;  // final evaluation on the held-out split
  std::vector<float> epoch_loss;
  std::vector<double> epoch_seconds;
  double sec_per_epoch = 0.0;
  double final_accuracy = 0.0;
};

// One full training run: dataset build, split, network init, epoch loop
// with seeded shuffling and milestone lr decay, final evaluation.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  RunArtifacts run(std::ostream* log = nullptr);

  const ExperimentConfig& config() const { return cfg_; }
  Network& net();
  const Dataset& train_set() const { return train_set_; }
  const Dataset& eval_set() const { return eval_set_; }

 private:
  ExperimentConfig cfg_;
  Dataset train_set_;
  Dataset eval_set_;
  std::unique_ptr<S2ATrainer> s2a_;
  std::unique_ptr<StbpTrainer> stbp_;
};

}  // namespace s2a

#endif  // SNN2ANN_EXPERIMENT_HPP_
