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

#ifndef SNN2ANN_NEURONS_HPP_
#define SNN2ANN_NEURONS_HPP_

#include <cstdint>
#include <vector>

#include "snn2ann/tensor.hpp"

namespace s2a {

enum class ResetMode { kHard, kSoft };

// One layer of integrate-and-fire neurons. State is per forward window:
// construct (or reset) before a window, then call step() once per time step
// with the synaptic input (weights and bias already applied).
//
// Hard reset: u <- u*(1-o_prev) + input, spike iff u > threshold (strict);
// the membrane keeps its pre-reset value until the next integration.
// Soft reset: reset-by-subtraction with the pending subtraction applied at
// spike time, so the stored membrane is already settled:
//   v = u + input; o = (v > threshold); u <- v - o*threshold.
class IFNeuronLayer {
 public:
  IFNeuronLayer(ResetMode mode, float threshold)
      : mode_(mode), threshold_(threshold) {
    S2A_CHECK(threshold > 0.0f, "firing threshold must be positive");
  }

  // Zeroes membrane and previous-spike state for a new window.
  void reset(const std::vector<int64_t>& shape) {
    membrane_ = Tensor(shape);
    spikes_ = Tensor(shape);
  }

  // Advances one time step; returns a reference to the binary spike map.
  const Tensor& step(const Tensor& synaptic_input);

  ResetMode reset_mode() const { return mode_; }
  float threshold() const { return threshold_; }
  void set_threshold(float v) {
    S2A_CHECK(v > 0.0f, "firing threshold must be positive");
    threshold_ = v;
  }
  const Tensor& membrane() const { return membrane_; }
  const Tensor& spikes() const { return spikes_; }

 private:
  ResetMode mode_;
  float threshold_;
  Tensor membrane_;
  Tensor spikes_;
};

// Integer spike counts accumulated over a window of T steps.
// Invariant: 0 <= counts <= window, elementwise and exactly integral.
struct SpikeAccumulator {
  Tensor counts;
  int64_t window = 0;

  void init(const std::vector<int64_t>& shape) {
    counts = Tensor(shape);
    window = 0;
  }
  void add(const Tensor& spikes);
};

struct WindowResult {
  SpikeAccumulator acc;
  std::vector<Tensor> spike_trains;
};

// Runs a fresh window of T = per_step_inputs.size() steps through the layer
// and accumulates the binary outputs.
WindowResult run_window(IFNeuronLayer& layer,
                        const std::vector<Tensor>& per_step_inputs);

// Rectangle pseudo-derivative of the spike nonlinearity:
// (1/a) * 1[|u - vth| < a/2], strict inequality at the window edge.
Tensor rect_surrogate(const Tensor& u, float vth, float a);

struct RateIdentityResult {
  // Per-neuron residual of the soft-reset rate identity
  //   r_T = (W*r_in + b)/vth - u_T/(T*vth)
  // which holds exactly by telescoping the membrane recurrence.
  Tensor residual;
  float max_abs_residual;
  // |r_T - clip((W*r_in + b)/vth, 0, 1)|: the rate-coding approximation gap,
  // which shrinks as T grows.
  Tensor clip_gap;
  float max_clip_gap;
};

// Drives one soft-reset layer with the constant per-step input W*input_rates
// + bias for T steps. Throws if applied to a hard-reset layer.
RateIdentityResult rate_identity_check(const Tensor& weights,
                                       const Tensor& bias,
                                       const Tensor& input_rates, float vth,
                                       int64_t steps,
                                       ResetMode mode = ResetMode::kSoft);

}  // namespace s2a

#endif  // SNN2ANN_NEURONS_HPP_
