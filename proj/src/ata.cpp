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

#include "snn2ann/ata.hpp"

namespace s2a {

NoiseStats noisy_spike_mass(const Tensor& counts, const Tensor& relu_out) {
  S2A_CHECK(counts.same_shape(relu_out),
            "noisy_spike_mass shape mismatch: counts "
                << shape_str(counts.shape) << " vs relu "
                << shape_str(relu_out.shape));
  NoiseStats s;
  double total = 0.0;
  for (size_t i = 0; i < counts.data.size(); ++i) {
    if (counts[i] > 0.0f && relu_out[i] == 0.0f) {
      ++s.omega_size;
      total += counts[i];
    }
  }
  if (s.omega_size > 0) s.mean_noise = float(total / double(s.omega_size));
  return s;
}

float ata_update(float vth, float mean_noise, const AtaConfig& cfg) {
  const float d = mean_noise - cfg.epsilon;
  const float sign = d > 0.0f ? 1.0f : (d < 0.0f ? -1.0f : 0.0f);
  const float xi = cfg.tau * (sign > 0.0f ? sign : 0.0f);
  // vth + xi*(1-alpha)*vth, written as one multiply so the growth factor is
  // exactly 1 or exactly 1 + tau*(1-alpha).
  return vth * (1.0f + xi * (1.0f - cfg.alpha));
}

}  // namespace s2a
