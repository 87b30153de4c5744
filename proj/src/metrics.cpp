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

#include "snn2ann/metrics.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "snn2ann/ops.hpp"

namespace s2a {

std::vector<double> count_ann_ops(const NetworkSpec& spec) {
  std::vector<double> ops;
  if (spec.layers.empty()) return ops;
  spec.validate();
  std::vector<int64_t> cur = spec.input_dims;
  for (size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    switch (l.kind) {
      case LayerKind::kConv: {
        const Conv2dDims d = conv2d_dims({1, cur[0], cur[1], cur[2]},
                                         {l.out, cur[0], l.k, l.k}, l.stride,
                                         l.pad);
        ops.push_back(double(l.k) * double(l.k) * double(cur[0]) *
                      double(d.h_out) * double(d.w_out) * double(l.out));
        cur = {l.out, d.h_out, d.w_out};
        break;
      }
      case LayerKind::kMaxPool: {
        // No MACs; shrinks the spike map the next layer sees.
        cur = {cur[0], (cur[1] - l.k) / l.stride + 1,
               (cur[2] - l.k) / l.stride + 1};
        break;
      }
      case LayerKind::kFC: {
        const int64_t fin = Tensor::numel_of(cur);
        ops.push_back(double(fin) * double(l.out));
        cur = {l.out};
        break;
      }
    }
  }
  return ops;
}

std::vector<double> spike_rates(const std::vector<double>& spikes_per_image,
                                const std::vector<int64_t>& neurons) {
  S2A_CHECK(spikes_per_image.size() == neurons.size(),
            "spike_rates length mismatch");
  S2A_CHECK(!neurons.empty(), "spike_rates on empty layer list");
  std::vector<double> r(neurons.size());
  for (size_t i = 0; i < r.size(); ++i) {
    S2A_CHECK(neurons[i] > 0, "layer with no neurons");
    r[i] = spikes_per_image[i] / double(neurons[i]);
  }
  return r;
}

double energy_ratio(const std::vector<double>& a_ops,
                    const std::vector<double>& s_ops, const OpsModel& model) {
  S2A_CHECK(a_ops.size() == s_ops.size() && !a_ops.empty(),
            "energy_ratio needs matching per-layer op lists");
  const size_t L = a_ops.size();
  double a_total = 0.0;
  for (double a : a_ops) a_total += a;
  // Classifier runs at ANN cost; with a single layer the network is all
  // classifier and the ratio is exactly 1.
  const double encoder = L > 1 ? s_ops.front() : 0.0;
  double hidden = 0.0;
  for (size_t n = 1; n + 1 < L; ++n) hidden += s_ops[n];
  const double denom =
      model.e_mac * (encoder + s_ops.back()) + model.e_add * hidden;
  S2A_CHECK(denom > 0.0, "energy denominator must be positive");
  return model.e_mac * a_total / denom;
}

std::vector<int64_t> noisy_histogram(const Tensor& counts,
                                     const Tensor& relu_out, int64_t window) {
  S2A_CHECK(counts.same_shape(relu_out), "noisy_histogram shape mismatch");
  S2A_CHECK(window >= 1, "noisy_histogram needs a positive window");
  std::vector<int64_t> hist(static_cast<size_t>(window), 0);
  for (size_t i = 0; i < counts.data.size(); ++i) {
    if (counts[i] > 0.0f && relu_out[i] == 0.0f) {
      const int64_t c = int64_t(counts[i]);
      if (c >= 1 && c <= window) ++hist[size_t(c - 1)];
    }
  }
  return hist;
}

namespace {

std::string fmt_full(double v) {
  std::ostringstream oss;
  oss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return oss.str();
}

}  // namespace

std::string MetricsReport::to_csv() const {
  std::ostringstream oss;
  oss << "layer_index,layer_kind,neurons,spikes_per_image,noisy_per_image,"
         "a_ops,s_ops\n";
  for (const LayerReport& l : layers) {
    oss << l.index << "," << l.kind << "," << l.neurons << ","
        << fmt_full(l.spikes_per_image) << "," << fmt_full(l.noisy_per_image)
        << "," << fmt_full(l.a_ops) << "," << fmt_full(l.s_ops) << "\n";
  }
  oss << "\n";
  oss << "e_mac," << fmt_full(model.e_mac) << "\n";
  oss << "e_add," << fmt_full(model.e_add) << "\n";
  oss << "energy_ratio," << fmt_full(energy_ratio_value) << "\n";
  oss << "accuracy," << fmt_full(accuracy) << "\n";
  oss << "spikes_per_image_total," << fmt_full(spikes_per_image_total) << "\n";
  return oss.str();
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["layers"] = nlohmann::json::array();
  for (const LayerReport& l : layers) {
    j["layers"].push_back({{"index", l.index},
                           {"kind", l.kind},
                           {"neurons", l.neurons},
                           {"spikes_per_image", l.spikes_per_image},
                           {"noisy_per_image", l.noisy_per_image},
                           {"a_ops", l.a_ops},
                           {"s_ops", l.s_ops}});
  }
  j["energy"] = {{"e_mac", model.e_mac},
                 {"e_add", model.e_add},
                 {"ratio", energy_ratio_value}};
  j["accuracy"] = accuracy;
  j["spikes_per_image_total"] = spikes_per_image_total;
  j["noisy_histogram"] = noisy_histogram;
  j["vth_trajectory"] = vth_trajectory;
  return j.dump(2);
}

MetricsReport MetricsReport::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MetricsReport r;
  for (const auto& jl : j.at("layers")) {
    LayerReport l;
    l.index = jl.at("index").get<int64_t>();
    l.kind = jl.at("kind").get<std::string>();
    l.neurons = jl.at("neurons").get<int64_t>();
    l.spikes_per_image = jl.at("spikes_per_image").get<double>();
    l.noisy_per_image = jl.at("noisy_per_image").get<double>();
    l.a_ops = jl.at("a_ops").get<double>();
    l.s_ops = jl.at("s_ops").get<double>();
    r.layers.push_back(std::move(l));
  }
  r.model.e_mac = j.at("energy").at("e_mac").get<double>();
  r.model.e_add = j.at("energy").at("e_add").get<double>();
  r.energy_ratio_value = j.at("energy").at("ratio").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  r.spikes_per_image_total = j.at("spikes_per_image_total").get<double>();
  r.noisy_histogram =
      j.at("noisy_histogram").get<std::vector<std::vector<int64_t>>>();
  r.vth_trajectory =
      j.at("vth_trajectory").get<std::vector<std::vector<float>>>();
  return r;
}

std::string compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream oss;
  oss << std::left << std::setw(12) << "trainer" << std::right << std::setw(10)
      << "acc(%)" << std::setw(7) << "steps" << std::setw(16) << "spikes/img"
      << std::setw(14) << "sec/epoch" << "\n";
  for (const CompareRow& r : rows) {
    oss << std::left << std::setw(12) << r.trainer << std::right
        << std::setw(10) << std::fixed << std::setprecision(2)
        << r.accuracy * 100.0 << std::setw(7) << r.steps << std::setw(16)
        << std::setprecision(1) << r.spikes_per_image << std::setw(14)
        << std::setprecision(4) << r.sec_per_epoch << "\n";
    oss.unsetf(std::ios::fixed);
  }
  return oss.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream oss;
  oss << "trainer,accuracy,steps,spikes_per_image,sec_per_epoch\n";
  for (const CompareRow& r : rows) {
    oss << r.trainer << "," << fmt_full(r.accuracy) << "," << r.steps << ","
        << fmt_full(r.spikes_per_image) << "," << fmt_full(r.sec_per_epoch)
        << "\n";
  }
  return oss.str();
}

}  // namespace s2a
