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

#include "snn2ann/neurons.hpp"

#include <cmath>

#include "snn2ann/kernels.hpp"
#include "snn2ann/ops.hpp"

namespace s2a {

const Tensor& IFNeuronLayer::step(const Tensor& synaptic_input) {
  S2A_CHECK(membrane_.numel() > 0, "IF layer not reset before stepping");
  S2A_CHECK(synaptic_input.same_shape(membrane_),
            "IF input shape " << shape_str(synaptic_input.shape)
                << " does not match membrane " << shape_str(membrane_.shape));
  const size_t n = static_cast<size_t>(membrane_.numel());
  if (mode_ == ResetMode::kHard) {
    kernels().if_step_hard(membrane_.ptr(), spikes_.ptr(),
                           synaptic_input.ptr(), threshold_, n);
  } else {
    kernels().if_step_soft(membrane_.ptr(), spikes_.ptr(),
                           synaptic_input.ptr(), threshold_, n);
  }
  membrane_.check_finite("IF membrane potential");
  return spikes_;
}

void SpikeAccumulator::add(const Tensor& spikes) {
  if (counts.numel() == 0) counts = Tensor(spikes.shape);
  S2A_CHECK(spikes.same_shape(counts), "spike accumulator shape mismatch");
  kernels().axpy(1.0f, spikes.ptr(), counts.ptr(),
                 static_cast<size_t>(counts.numel()));
  ++window;
}

WindowResult run_window(IFNeuronLayer& layer,
                        const std::vector<Tensor>& per_step_inputs) {
  S2A_CHECK(!per_step_inputs.empty(), "window must contain at least one step");
  WindowResult r;
  layer.reset(per_step_inputs.front().shape);
  r.acc.init(per_step_inputs.front().shape);
  r.spike_trains.reserve(per_step_inputs.size());
  for (const Tensor& input : per_step_inputs) {
    const Tensor& spikes = layer.step(input);
    r.acc.add(spikes);
    r.spike_trains.push_back(spikes);
  }
  return r;
}

Tensor rect_surrogate(const Tensor& u, float vth, float a) {
  S2A_CHECK(a > 0.0f, "rectangle width must be positive");
  Tensor g(u.shape);
  const float inv = 1.0f / a;
  const float half = a * 0.5f;
  for (size_t i = 0; i < g.data.size(); ++i) {
    g[i] = std::fabs(u[i] - vth) < half ? inv : 0.0f;
  }
  return g;
}

RateIdentityResult rate_identity_check(const Tensor& weights,
                                       const Tensor& bias,
                                       const Tensor& input_rates, float vth,
                                       int64_t steps, ResetMode mode) {
  S2A_CHECK(mode == ResetMode::kSoft,
            "rate identity requires a soft-reset layer");
  S2A_CHECK(steps >= 1, "window must have at least one step");
  const Tensor rates_row = input_rates.reshaped({1, input_rates.numel()});
  const Tensor drive = fc_forward(rates_row, weights, bias);

  IFNeuronLayer layer(ResetMode::kSoft, vth);
  std::vector<Tensor> inputs(static_cast<size_t>(steps), drive);
  WindowResult w = run_window(layer, inputs);

  RateIdentityResult r;
  r.residual = Tensor(drive.shape);
  r.clip_gap = Tensor(drive.shape);
  r.max_abs_residual = 0.0f;
  r.max_clip_gap = 0.0f;
  const float t = float(steps);
  for (size_t i = 0; i < r.residual.data.size(); ++i) {
    const float rate = w.acc.counts[i] / t;
    const float ann = drive[i] / vth;
    r.residual[i] = rate - (ann - layer.membrane()[i] / (t * vth));
    const float clipped = std::min(std::max(ann, 0.0f), 1.0f);
    r.clip_gap[i] = std::fabs(rate - clipped);
    r.max_abs_residual =
        std::max(r.max_abs_residual, std::fabs(r.residual[i]));
    r.max_clip_gap = std::max(r.max_clip_gap, r.clip_gap[i]);
  }
  return r;
}

}  // namespace s2a
