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

#ifndef SNN2ANN_TRAIN_HPP_
#define SNN2ANN_TRAIN_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "snn2ann/ata.hpp"
#include "snn2ann/network.hpp"
#include "snn2ann/neurons.hpp"
#include "snn2ann/ops.hpp"

namespace s2a {

enum class TrainerKind { kS2AReSU, kS2ASTSU, kStbp };

const char* trainer_name(TrainerKind k);
TrainerKind trainer_from_name(const std::string& name);
bool trainer_is_s2a(TrainerKind k);

struct TrainConfig {
  TrainerKind trainer = TrainerKind::kS2ASTSU;
  int64_t epochs = 50;
  int64_t batch_size = 32;
  AdamConfig adam;
  std::vector<int64_t> lr_milestones;  // epochs at which lr decays by 90%
  uint64_t seed = 1;
  int64_t time_steps = 4;
  bool ata_enabled = true;
  AtaConfig ata;
  float bn_alpha = 0.1f;
  float bn_eps = 1e-5f;
  float surrogate_width = 1.0f;  // rectangle width a for the STBP baseline
  VthInit vth_init;              // uniform for S2A, fixed for STBP by default
};

// One pass of the SNN branch over a full window: per-step folded affine,
// optional max-pool on the (conv) output, IF firing, spike accumulation.
// The classifier consumes the accumulated spikes of the last encoder.
struct SnnPass {
  std::vector<Tensor> counts;  // per station, [N, out_dims]
  Tensor cls_in;               // flattened classifier input
  Tensor logits;
};
// use_fold=false runs the raw weights (STBP); true folds BN per step (S2A).
SnnPass snn_pass(const Network& net, const Tensor& batch, int64_t time_steps,
                 bool use_fold);

// Caches from one dual-branch forward, consumed by the backward pass.
struct LayerTrace {
  Tensor counts;   // accumulated spikes from the SNN branch
  Tensor xq_in;    // input the ANN affine consumed (shaped)
  Tensor pre;      // W*xq_in + b
  Tensor bn_out;
  PoolResult pool;  // valid when the station pools
  Tensor x_r;       // relu output
  Tensor x_q;       // mapping-unit output
  BatchStats stats;  // batch statistics of pre (for the EMA update)
  NoiseStats noise;  // noisy-spike measurement for ATA
};

struct ForwardTrace {
  std::vector<LayerTrace> layers;
  Tensor cls_in;
  Tensor logits;
};

// Runs both phases (SNN window, then ANN branch with mapping units) without
// touching any state; the building block for training and evaluation.
ForwardTrace s2a_forward_pass(const Network& net, const Tensor& batch,
                              int64_t time_steps);

class S2ATrainer {
 public:
  S2ATrainer(Network net, TrainConfig cfg);

  // Phase 1 (SNN window) + phase 2 (ANN branch with mapping units).
  ForwardTrace forward(const Tensor& batch);
  // ANN-branch-only backward; fills parameter grads, returns the loss.
  float backward(const ForwardTrace& trace, const std::vector<int>& labels);
  // forward + ATA + backward + Adam + BN EMA update.
  float train_step(const Tensor& batch, const std::vector<int>& labels);

  // SNN branch + classifier only (folded weights, frozen thresholds).
  std::vector<int> infer(const Tensor& batch) const;
  SnnPass infer_pass(const Tensor& batch) const;

  Network& net() { return net_; }
  const Network& net() const { return net_; }
  const TrainConfig& config() const { return cfg_; }
  AdamOptimizer& optimizer() { return opt_; }
  // Per-iteration per-layer threshold log (one row appended per train_step).
  const std::vector<std::vector<float>>& vth_history() const {
    return vth_history_;
  }

 private:
  Network net_;
  TrainConfig cfg_;
  AdamOptimizer opt_;
  std::vector<std::vector<float>> vth_history_;
};

// The loss of the ANN branch with spike counts frozen and each mapping unit
// linearized around the base forward (x_q = x_r + offset with offset
// constant). The gradient of this function w.r.t. the shared parameters is
// exactly what the straight-through backward computes, which makes it the
// right target for finite-difference checks.
float s2a_surrogate_loss(Network& net, const Tensor& batch,
                         const std::vector<int>& labels,
                         const std::vector<Tensor>& frozen_counts,
                         const std::vector<Tensor>& frozen_offsets);

class StbpTrainer {
 public:
  StbpTrainer(Network net, TrainConfig cfg);

  // BPTT through all T steps with the rectangle surrogate and the reset-path
  // gradient detached. Fills grads, returns the loss.
  float backward(const Tensor& batch, const std::vector<int>& labels);
  float train_step(const Tensor& batch, const std::vector<int>& labels);

  std::vector<int> infer(const Tensor& batch) const;
  SnnPass infer_pass(const Tensor& batch) const;

  Network& net() { return net_; }
  const Network& net() const { return net_; }
  const TrainConfig& config() const { return cfg_; }
  AdamOptimizer& optimizer() { return opt_; }

 private:
  Network net_;
  TrainConfig cfg_;
  AdamOptimizer opt_;
};

std::vector<int> argmax_rows(const Tensor& logits);

}  // namespace s2a

#endif  // SNN2ANN_TRAIN_HPP_
