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

#include <utility>

#include "snn2ann/train.hpp"

namespace s2a {

const char* trainer_name(TrainerKind k) {
  switch (k) {
    case TrainerKind::kS2AReSU:
      return "s2a-resu";
    case TrainerKind::kS2ASTSU:
      return "s2a-stsu";
    case TrainerKind::kStbp:
      return "stbp";
  }
  return "?";
}

TrainerKind trainer_from_name(const std::string& name) {
  if (name == "s2a-resu") return TrainerKind::kS2AReSU;
  if (name == "s2a-stsu") return TrainerKind::kS2ASTSU;
  if (name == "stbp") return TrainerKind::kStbp;
  S2A_CHECK(false, "unknown trainer '" << name
                       << "' (expected s2a-resu, s2a-stsu or stbp)");
  return TrainerKind::kS2ASTSU;
}

bool trainer_is_s2a(TrainerKind k) { return k != TrainerKind::kStbp; }

std::vector<int> argmax_rows(const Tensor& logits) {
  S2A_CHECK(logits.shape.size() == 2, "argmax expects [N,K]");
  const int64_t n = logits.shape[0], k = logits.shape[1];
  std::vector<int> out(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const float* row = logits.ptr() + i * k;
    int best = 0;
    for (int64_t j = 1; j < k; ++j) {
      if (row[j] > row[best]) best = int(j);
    }
    out[size_t(i)] = best;
  }
  return out;
}

SnnPass snn_pass(const Network& net, const Tensor& batch, int64_t time_steps,
                 bool use_fold) {
  S2A_CHECK(time_steps >= 1, "time window must be at least one step");
  const int64_t n = batch.shape[0];
  SnnPass out;
  const size_t stations = net.layers.size();

  std::vector<FoldedParams> folded(stations);
  std::vector<IFNeuronLayer> neurons;
  neurons.reserve(stations);
  out.counts.resize(stations);
  for (size_t i = 0; i < stations; ++i) {
    const SharedLayer& l = net.layers[i];
    if (use_fold) {
      folded[i] = fold_weights(l.weight.value, l.bias.value, l.bn, time_steps);
    } else {
      folded[i] = {l.weight.value, l.bias.value};
    }
    neurons.emplace_back(ResetMode::kHard, l.vth);
    neurons.back().reset(batch_dims(n, l.out_dims));
    out.counts[i] = Tensor(batch_dims(n, l.out_dims));
  }

  for (int64_t t = 0; t < time_steps; ++t) {
    const Tensor* x = &batch;
    for (size_t i = 0; i < stations; ++i) {
      const SharedLayer& l = net.layers[i];
      Tensor a = net.station_affine(i, folded[i].weight, folded[i].bias, *x);
      if (l.has_pool) {
        a = maxpool2d(a, l.pool_k, l.pool_stride).output;
      }
      const Tensor& spikes = neurons[i].step(a);
      accumulate(out.counts[i], spikes);
      x = &neurons[i].spikes();
    }
  }

  out.cls_in = stations > 0 ? flatten2d(out.counts.back()) : flatten2d(batch);
  out.logits = fc_forward(out.cls_in, net.cls_weight.value,
                          net.cls_bias.value);
  return out;
}

namespace {

// Shared ANN-branch walk. When offsets is non-null the mapping unit is
// linearized: x_q = x_r + offsets[i] (counts frozen inside the offsets).
ForwardTrace ann_phase(const Network& net, const Tensor& batch,
                       std::vector<Tensor> counts,
                       const std::vector<Tensor>* offsets) {
  ForwardTrace trace;
  trace.layers.resize(net.layers.size());
  Tensor xq = batch;
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const SharedLayer& l = net.layers[i];
    LayerTrace& lt = trace.layers[i];
    lt.counts = std::move(counts[i]);
    lt.xq_in = l.is_conv ? xq : flatten2d(xq);
    lt.pre = net.station_affine(i, l.weight.value, l.bias.value, xq);
    S2A_CHECK(lt.pre.all_finite(),
              "non-finite ANN pre-activation at layer " << i);
    lt.stats = batch_stats(lt.pre);
    lt.bn_out = bn_apply(lt.pre, l.bn);
    if (l.has_pool) {
      lt.pool = maxpool2d(lt.bn_out, l.pool_k, l.pool_stride);
      lt.x_r = relu(lt.pool.output);
    } else {
      lt.x_r = relu(lt.bn_out);
    }
    S2A_CHECK(lt.x_r.same_shape(lt.counts),
              "mapping-unit shape mismatch at layer "
                  << i << ": ANN " << shape_str(lt.x_r.shape) << " vs SNN "
                  << shape_str(lt.counts.shape)
                  << " (check pooling placement)");
    if (offsets != nullptr) {
      lt.x_q = lt.x_r;
      const Tensor& off = (*offsets)[i];
      S2A_CHECK(off.same_shape(lt.x_r), "frozen offset shape mismatch");
      for (size_t j = 0; j < lt.x_q.data.size(); ++j) lt.x_q[j] += off[j];
    } else if (net.spec.mapping == MappingKind::kReSU) {
      lt.x_q = resu_forward(lt.x_r, lt.counts);
    } else {
      lt.x_q = stsu_forward(lt.x_r, lt.counts);
    }
    lt.noise = noisy_spike_mass(lt.counts, lt.x_r);
    xq = lt.x_q;
  }
  trace.cls_in = flatten2d(xq);
  trace.logits =
      fc_forward(trace.cls_in, net.cls_weight.value, net.cls_bias.value);
  S2A_CHECK(trace.logits.all_finite(), "non-finite classifier logits");
  return trace;
}

}  // namespace

ForwardTrace s2a_forward_pass(const Network& net, const Tensor& batch,
                              int64_t time_steps) {
  SnnPass snn = snn_pass(net, batch, time_steps, /*use_fold=*/true);
  return ann_phase(net, batch, std::move(snn.counts), nullptr);
}

S2ATrainer::S2ATrainer(Network net, TrainConfig cfg)
    : net_(std::move(net)), cfg_(cfg), opt_(cfg.adam) {
  S2A_CHECK(trainer_is_s2a(cfg.trainer),
            "S2ATrainer requires an s2a trainer kind");
  net_.spec.mapping = cfg.trainer == TrainerKind::kS2AReSU
                          ? MappingKind::kReSU
                          : MappingKind::kSTSU;
  net_.spec.time_steps = cfg.time_steps;
  auto params = net_.trainable_params(/*include_bn=*/true);
  auto names = net_.trainable_names(/*include_bn=*/true);
  for (size_t i = 0; i < params.size(); ++i) opt_.attach(params[i], names[i]);
}

ForwardTrace S2ATrainer::forward(const Tensor& batch) {
  return s2a_forward_pass(net_, batch, cfg_.time_steps);
}

float S2ATrainer::backward(const ForwardTrace& trace,
                           const std::vector<int>& labels) {
  XentResult xent = softmax_xent(trace.logits, labels);
  FcGrads cls = fc_backward(xent.grad_logits, trace.cls_in,
                            net_.cls_weight.value);
  accumulate(net_.cls_weight.grad, cls.grad_weight);
  accumulate(net_.cls_bias.grad, cls.grad_bias);

  Tensor dxq = std::move(cls.grad_input);
  for (size_t ri = net_.layers.size(); ri-- > 0;) {
    SharedLayer& l = net_.layers[ri];
    const LayerTrace& lt = trace.layers[ri];
    // Straight-through: the upstream gradient passes to the relu output
    // unchanged; the count path contributes nothing.
    Tensor dxr = dxq.reshaped(lt.x_r.shape);
    Tensor dpooled = relu_backward(dxr, lt.x_r);
    Tensor dbn = l.has_pool
                     ? maxpool2d_backward(dpooled, lt.pool.argmax,
                                          lt.bn_out.shape)
                     : std::move(dpooled);
    BnGrads bng = bn_backward(dbn, lt.pre, l.bn);
    accumulate(l.bn.gamma.grad, bng.grad_gamma);
    accumulate(l.bn.beta.grad, bng.grad_beta);
    if (l.is_conv) {
      Conv2dGrads cg = conv2d_backward(bng.grad_pre, lt.xq_in, l.weight.value,
                                       l.stride, l.pad);
      accumulate(l.weight.grad, cg.grad_weight);
      accumulate(l.bias.grad, cg.grad_bias);
      dxq = std::move(cg.grad_input);
    } else {
      FcGrads fg = fc_backward(bng.grad_pre, lt.xq_in, l.weight.value);
      accumulate(l.weight.grad, fg.grad_weight);
      accumulate(l.bias.grad, fg.grad_bias);
      dxq = std::move(fg.grad_input);
    }
  }
  return xent.loss;
}

float S2ATrainer::train_step(const Tensor& batch,
                             const std::vector<int>& labels) {
  opt_.zero_grad();
  ForwardTrace trace = forward(batch);
  if (cfg_.ata_enabled) {
    for (size_t i = 0; i < net_.layers.size(); ++i) {
      net_.layers[i].vth =
          ata_update(net_.layers[i].vth, trace.layers[i].noise.mean_noise,
                     cfg_.ata);
    }
  }
  std::vector<float> row(net_.layers.size());
  for (size_t i = 0; i < row.size(); ++i) row[i] = net_.layers[i].vth;
  vth_history_.push_back(std::move(row));

  const float loss = backward(trace, labels);
  opt_.step();
  for (size_t i = 0; i < net_.layers.size(); ++i) {
    update_ema(net_.layers[i].bn, trace.layers[i].stats.mu,
               trace.layers[i].stats.sigma);
  }
  return loss;
}

SnnPass S2ATrainer::infer_pass(const Tensor& batch) const {
  return snn_pass(net_, batch, cfg_.time_steps, /*use_fold=*/true);
}

std::vector<int> S2ATrainer::infer(const Tensor& batch) const {
  return argmax_rows(infer_pass(batch).logits);
}

float s2a_surrogate_loss(Network& net, const Tensor& batch,
                         const std::vector<int>& labels,
                         const std::vector<Tensor>& frozen_counts,
                         const std::vector<Tensor>& frozen_offsets) {
  ForwardTrace trace =
      ann_phase(net, batch, frozen_counts, &frozen_offsets);
  return softmax_xent(trace.logits, labels).loss;
}

}  // namespace s2a
