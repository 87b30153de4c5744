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

#ifndef SNN2ANN_ATA_HPP_
#define SNN2ANN_ATA_HPP_

#include <cstdint>

#include "snn2ann/tensor.hpp"

namespace s2a {

struct AtaConfig {
  float tau = 0.1f;      // growth scale
  float alpha = 0.1f;    // momentum
  float epsilon = 0.01f; // noise tolerance, in [0,1]
};

struct NoiseStats {
  int64_t omega_size = 0;  // number of noisy positions
  float mean_noise = 0.0f; // mean spike count over noisy positions
};

// A position is noisy when the SNN spiked there (count > 0) while the
// weight-shared ANN's ReLU output is zero. Returns the mean accumulated
// count over those positions (0 when there are none).
NoiseStats noisy_spike_mass(const Tensor& counts, const Tensor& relu_out);

// One threshold adjustment: vth <- vth + xi*(1-alpha)*vth with
// xi = tau*max(0, sign(mean_noise - epsilon)). The multiplier is exactly 1
// or exactly 1 + tau*(1-alpha), so thresholds never decrease.
float ata_update(float vth, float mean_noise, const AtaConfig& cfg);

// Per-layer adaptive threshold state.
struct AtaState {
  float vth;
  AtaConfig cfg;

  AtaState(float initial_vth, AtaConfig c) : vth(initial_vth), cfg(c) {
    S2A_CHECK(initial_vth > 0.0f, "threshold must be positive");
  }

  float update(float mean_noise) {
    vth = ata_update(vth, mean_noise, cfg);
    return vth;
  }
};

}  // namespace s2a

#endif  // SNN2ANN_ATA_HPP_
