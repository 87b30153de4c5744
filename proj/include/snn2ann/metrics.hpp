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

#ifndef SNN2ANN_METRICS_HPP_
#define SNN2ANN_METRICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "snn2ann/network.hpp"

namespace s2a {

// 45nm CMOS per-operation energies (pJ): spiking layers replace MACs with
// additions.
struct OpsModel {
  double e_mac = 4.6;
  double e_add = 0.9;
};

// Per-layer multiply-accumulate counts for one input:
//   conv: k*k*c_in*h_out*w_out*c_out (pooling adds none)
//   fc:   f_in*f_out
// One entry per spiking station plus the classifier, in order.
std::vector<double> count_ann_ops(const NetworkSpec& spec);

// r_n = spikes per neuron over the whole window; S_ops,n = r_n * A_ops,n.
std::vector<double> spike_rates(const std::vector<double>& spikes_per_image,
                                const std::vector<int64_t>& neurons);

// Energy benefit of the SNN over the ANN. The first station is the encoder
// (real-valued input, MAC cost) and the classifier always runs at ANN cost;
// hidden stations run at addition cost scaled by their spike rates:
//   E_A/E_S = e_mac*sum(A) /
//             (e_mac*(S_1 + S_L) + e_add*sum_{n=2..L-1} S_n)
double energy_ratio(const std::vector<double>& a_ops,
                    const std::vector<double>& s_ops, const OpsModel& model);

// Histogram of noisy-spike magnitudes: entry [c-1] counts positions where
// the SNN accumulated exactly c spikes while the ANN relu output is zero,
// for c in 1..window.
std::vector<int64_t> noisy_histogram(const Tensor& counts,
                                     const Tensor& relu_out, int64_t window);

struct LayerReport {
  int64_t index = 0;       // 1-based layer number
  std::string kind;        // conv / conv+pool / fc / classifier
  int64_t neurons = 0;     // per image
  double spikes_per_image = 0.0;
  double noisy_per_image = 0.0;
  double a_ops = 0.0;
  double s_ops = 0.0;
};

struct MetricsReport {
  std::vector<LayerReport> layers;
  OpsModel model;
  double energy_ratio_value = 0.0;
  double accuracy = 0.0;
  double spikes_per_image_total = 0.0;
  // Noisy-spike histogram per station: entry [c-1] counts positions whose
  // accumulated noisy count equals c, for c in 1..T.
  std::vector<std::vector<int64_t>> noisy_histogram;
  // Firing-threshold log, one row per training iteration.
  std::vector<std::vector<float>> vth_trajectory;

  std::string to_csv() const;
  std::string to_json() const;
  static MetricsReport from_json(const std::string& text);
};

// Renders the side-by-side comparison table (accuracy, steps, spikes/image,
// seconds/epoch) produced by the compare subcommand.
struct CompareRow {
  std::string trainer;
  double accuracy = 0.0;
  int64_t steps = 0;
  double spikes_per_image = 0.0;
  double sec_per_epoch = 0.0;
};
std::string compare_table(const std::vector<CompareRow>& rows);
std::string compare_csv(const std::vector<CompareRow>& rows);

}  // namespace s2a

#endif  // SNN2ANN_METRICS_HPP_
