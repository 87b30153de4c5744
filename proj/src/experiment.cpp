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

#include "snn2ann/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace s2a {

Dataset build_dataset(const ExperimentConfig& cfg) {
  const DatasetConfig& d = cfg.dataset;
  const uint64_t seed = cfg.train.seed;
  if (d.kind == "blobs") return synth_blobs(d.samples, d.classes, seed);
  if (d.kind == "rings") return synth_two_rings(d.samples, seed);
  if (d.kind == "images") {
    return synth_images(d.samples, d.classes, seed, d.image_h, d.image_w);
  }
  if (d.kind == "idx") return load_idx(d.idx_images, d.idx_labels);
  S2A_CHECK(false, "unknown dataset kind '" << d.kind << "'");
  return {};
}

namespace {

std::vector<std::vector<int64_t>> make_batches(int64_t n, int64_t batch_size,
                                               std::mt19937& rng) {
  std::vector<int64_t> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int64_t>> batches;
  for (int64_t start = 0; start < n; start += batch_size) {
    const int64_t stop = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + stop);
  }
  return batches;
}

const char* station_kind(const SharedLayer& l) {
  if (l.is_conv) return l.has_pool ? "conv+pool" : "conv";
  return "fc";
}

}  // namespace

MetricsReport evaluate_model(const Network& net, TrainerKind kind,
                             int64_t time_steps, const Dataset& eval_set,
                             int64_t batch_size) {
  const size_t stations = net.layers.size();
  const bool s2a = trainer_is_s2a(kind);
  std::vector<double> spikes(stations, 0.0);
  std::vector<double> noisy(stations, 0.0);
  std::vector<std::vector<int64_t>> hist(
      stations, std::vector<int64_t>(static_cast<size_t>(time_steps), 0));
  int64_t correct = 0;

  for (int64_t start = 0; start < eval_set.size(); start += batch_size) {
    const int64_t stop = std::min(eval_set.size(), start + batch_size);
    std::vector<int64_t> idx(static_cast<size_t>(stop - start));
    std::iota(idx.begin(), idx.end(), start);
    const Tensor batch = eval_set.gather(idx);
    const std::vector<int> labels = eval_set.gather_labels(idx);

    std::vector<Tensor> counts;
    Tensor snn_logits;
    if (s2a) {
      ForwardTrace trace = s2a_forward_pass(net, batch, time_steps);
      counts.reserve(stations);
      for (size_t i = 0; i < stations; ++i) {
        const LayerTrace& lt = trace.layers[i];
        counts.push_back(lt.counts);
        const std::vector<int64_t> h =
            noisy_histogram(lt.counts, lt.x_r, time_steps);
        for (size_t c = 0; c < h.size(); ++c) {
          hist[i][c] += h[c];
          noisy[i] += double(h[c]) * double(c + 1);
        }
      }
      const Tensor cls_in =
          stations > 0 ? flatten2d(counts.back()) : flatten2d(batch);
      snn_logits =
          fc_forward(cls_in, net.cls_weight.value, net.cls_bias.value);
    } else {
      SnnPass pass = snn_pass(net, batch, time_steps, /*use_fold=*/false);
      counts = std::move(pass.counts);
      snn_logits = std::move(pass.logits);
    }
    for (size_t i = 0; i < stations; ++i) {
      double total = 0.0;
      for (float v : counts[i].data) total += v;
      spikes[i] += total;
    }
    const std::vector<int> pred = argmax_rows(snn_logits);
    for (size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == labels[i]) ++correct;
    }
  }

  const double images = double(eval_set.size());
  MetricsReport report;
  report.accuracy = double(correct) / images;
  const std::vector<double> a_ops = count_ann_ops(net.spec);
  std::vector<int64_t> neurons(stations);
  std::vector<double> spikes_per_image(stations);
  for (size_t i = 0; i < stations; ++i) {
    neurons[i] = net.layers[i].neurons;
    spikes_per_image[i] = spikes[i] / images;
    report.spikes_per_image_total += spikes_per_image[i];
  }
  std::vector<double> s_ops(a_ops.size(), 0.0);
  if (stations > 0) {
    const std::vector<double> rates = spike_rates(spikes_per_image, neurons);
    for (size_t i = 0; i < stations; ++i) s_ops[i] = rates[i] * a_ops[i];
  }
  s_ops.back() = a_ops.back();
  report.energy_ratio_value = energy_ratio(a_ops, s_ops, report.model);

  for (size_t i = 0; i < stations; ++i) {
    LayerReport lr;
    lr.index = int64_t(i) + 1;
    lr.kind = station_kind(net.layers[i]);
    lr.neurons = neurons[i];
    lr.spikes_per_image = spikes_per_image[i];
    lr.noisy_per_image = noisy[i] / images;
    lr.a_ops = a_ops[i];
    lr.s_ops = s_ops[i];
    report.layers.push_back(std::move(lr));
  }
  LayerReport cls;
  cls.index = int64_t(stations) + 1;
  cls.kind = "classifier";
  cls.neurons = net.classes;
  cls.a_ops = a_ops.back();
  cls.s_ops = s_ops.back();
  report.layers.push_back(std::move(cls));
  report.noisy_histogram = std::move(hist);
  return report;
}

Experiment::Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  Dataset full = build_dataset(cfg_);
  S2A_CHECK(full.classes >= 2, "dataset needs at least two classes");
  auto parts = full.split(cfg_.dataset.train_fraction);
  train_set_ = std::move(parts.first);
  eval_set_ = std::move(parts.second);

  NetworkSpec spec = cfg_.network_spec();
  S2A_CHECK(spec.layers.back().out == full.classes,
            "classifier width " << spec.layers.back().out
                                << " does not match dataset classes "
                                << full.classes);
  std::mt19937 rng(static_cast<uint32_t>(cfg_.train.seed));
  Network net = Network::build(spec, rng, cfg_.train.vth_init,
                               cfg_.train.bn_alpha, cfg_.train.bn_eps);
  if (cfg_.train.trainer == TrainerKind::kStbp) {
    stbp_ = std::make_unique<StbpTrainer>(std::move(net), cfg_.train);
  } else {
    s2a_ = std::make_unique<S2ATrainer>(std::move(net), cfg_.train);
  }
}

Network& Experiment::net() { return s2a_ ? s2a_->net() : stbp_->net(); }

RunArtifacts Experiment::run(std::ostream* log) {
  RunArtifacts out;
  std::mt19937 shuffle_rng(static_cast<uint32_t>(cfg_.train.seed) + 1);
  const TrainConfig& tc = cfg_.train;
  float lr = tc.adam.lr;
  for (int64_t epoch = 1; epoch <= tc.epochs; ++epoch) {
    if (std::find(tc.lr_milestones.begin(), tc.lr_milestones.end(), epoch) !=
        tc.lr_milestones.end()) {
      lr *= 0.1f;  // decay by 90%
      if (s2a_) s2a_->optimizer().set_lr(lr);
      if (stbp_) stbp_->optimizer().set_lr(lr);
    }
    const auto t0 = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    int64_t steps = 0;
    for (const auto& idx :
         make_batches(train_set_.size(), tc.batch_size, shuffle_rng)) {
      const Tensor batch = train_set_.gather(idx);
      const std::vector<int> labels = train_set_.gather_labels(idx);
      const float loss = s2a_ ? s2a_->train_step(batch, labels)
                              : stbp_->train_step(batch, labels);
      loss_sum += loss;
      ++steps;
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    out.epoch_loss.push_back(float(loss_sum / double(steps)));
    out.epoch_seconds.push_back(secs);
    if (log != nullptr) {
      (*log) << "epoch " << epoch << "/" << tc.epochs
             << " loss=" << out.epoch_loss.back() << " time=" << secs << "s\n";
    }
  }
  out.sec_per_epoch =
      std::accumulate(out.epoch_seconds.begin(), out.epoch_seconds.end(),
                      0.0) /
      double(std::max<size_t>(1, out.epoch_seconds.size()));

  out.metrics = evaluate_model(net(), tc.trainer, tc.time_steps, eval_set_,
                               tc.batch_size);
  if (s2a_) out.metrics.vth_trajectory = s2a_->vth_history();
  out.final_accuracy = out.metrics.accuracy;
  if (log != nullptr) {
    (*log) << "final eval accuracy=" << out.final_accuracy << "\n";
  }
  return out;
}

}  // namespace s2a
