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

// Spatio-temporal backprop baseline: BPTT through the IF dynamics with a
// rectangle surrogate for the spike nonlinearity and the reset-path gradient
// detached, trained on raw weights (no BN folding, fixed thresholds).

#include <utility>

#include "snn2ann/train.hpp"

namespace s2a {

namespace {

// Everything the backward sweep needs, stored per station per step.
struct StbpStepCache {
  Tensor membrane;              // pre-reset potential u^t
  Tensor spikes;                // o^t
  std::vector<int64_t> argmax;  // pool routing for this step
};

struct StbpCache {
  // [station][step]
  std::vector<std::vector<StbpStepCache>> steps;
  std::vector<Tensor> counts;  // accumulated spikes per station
  Tensor cls_in;
  Tensor logits;
};

StbpCache stbp_forward(const Network& net, const Tensor& batch,
                       int64_t time_steps) {
  const int64_t n = batch.shape[0];
  const size_t stations = net.layers.size();
  StbpCache cache;
  cache.steps.resize(stations);
  cache.counts.resize(stations);

  std::vector<IFNeuronLayer> neurons;
  neurons.reserve(stations);
  for (size_t i = 0; i < stations; ++i) {
    const SharedLayer& l = net.layers[i];
    neurons.emplace_back(ResetMode::kHard, l.vth);
    neurons.back().reset(batch_dims(n, l.out_dims));
    cache.counts[i] = Tensor(batch_dims(n, l.out_dims));
    cache.steps[i].resize(static_cast<size_t>(time_steps));
  }

  for (int64_t t = 0; t < time_steps; ++t) {
    const Tensor* x = &batch;
    for (size_t i = 0; i < stations; ++i) {
      const SharedLayer& l = net.layers[i];
      Tensor a =
          net.station_affine(i, l.weight.value, l.bias.value, *x);
      StbpStepCache& sc = cache.steps[i][static_cast<size_t>(t)];
      if (l.has_pool) {
        PoolResult p = maxpool2d(a, l.pool_k, l.pool_stride);
        sc.argmax = std::move(p.argmax);
        a = std::move(p.output);
      }
      neurons[i].step(a);
      sc.membrane = neurons[i].membrane();
      sc.spikes = neurons[i].spikes();
      accumulate(cache.counts[i], sc.spikes);
      x = &neurons[i].spikes();
    }
  }

  cache.cls_in =
      stations > 0 ? flatten2d(cache.counts.back()) : flatten2d(batch);
  cache.logits =
      fc_forward(cache.cls_in, net.cls_weight.value, net.cls_bias.value);
  return cache;
}

}  // namespace

StbpTrainer::StbpTrainer(Network net, TrainConfig cfg)
    : net_(std::move(net)), cfg_(cfg), opt_(cfg.adam) {
  S2A_CHECK(cfg.trainer == TrainerKind::kStbp,
            "StbpTrainer requires trainer=stbp");
  net_.spec.time_steps = cfg.time_steps;
  // Raw weights only: BN stays at identity and is not trained.
  auto params = net_.trainable_params(/*include_bn=*/false);
  auto names = net_.trainable_names(/*include_bn=*/false);
  for (size_t i = 0; i < params.size(); ++i) opt_.attach(params[i], names[i]);
}

float StbpTrainer::backward(const Tensor& batch,
                            const std::vector<int>& labels) {
  const int64_t T = cfg_.time_steps;
  StbpCache cache = stbp_forward(net_, batch, T);
  XentResult xent = softmax_xent(cache.logits, labels);

  FcGrads cls =
      fc_backward(xent.grad_logits, cache.cls_in, net_.cls_weight.value);
  accumulate(net_.cls_weight.grad, cls.grad_weight);
  accumulate(net_.cls_bias.grad, cls.grad_bias);
  if (net_.layers.empty()) return xent.loss;

  // d loss / d o^{t,i}, per step, for the station currently being processed.
  // The classifier reads the accumulated spikes of the top station, so every
  // step of that station starts from the same accumulator gradient.
  const size_t tsz = static_cast<size_t>(T);
  std::vector<Tensor> dspikes(tsz);
  {
    Tensor dacc = cls.grad_input.reshaped(
        batch_dims(batch.shape[0], net_.layers.back().out_dims));
    for (size_t t = 0; t < tsz; ++t) dspikes[t] = dacc;
  }

  for (size_t ri = net_.layers.size(); ri-- > 0;) {
    SharedLayer& l = net_.layers[ri];
    std::vector<Tensor> dspikes_below(tsz);
    Tensor carry;  // du^{t+1} * (1 - o^t), propagated backward in time
    for (size_t t = tsz; t-- > 0;) {
      const StbpStepCache& sc = cache.steps[ri][t];
      // du^t = do^t * surrogate'(u^t) + carry
      Tensor du = rect_surrogate(sc.membrane, l.vth, cfg_.surrogate_width);
      for (size_t j = 0; j < du.data.size(); ++j) {
        du[j] *= dspikes[t][j];
      }
      if (carry.numel() > 0) accumulate(du, carry);
      if (t > 0) {
        const Tensor& o_prev = cache.steps[ri][t - 1].spikes;
        carry = Tensor(du.shape);
        for (size_t j = 0; j < du.data.size(); ++j) {
          carry[j] = du[j] * (1.0f - o_prev[j]);
        }
      }
      Tensor dpre =
          l.has_pool
              ? maxpool2d_backward(du, sc.argmax,
                                   batch_dims(batch.shape[0], l.pre_dims))
              : std::move(du);
      const Tensor input_t =
          ri == 0 ? (l.is_conv ? batch : flatten2d(batch))
                  : (l.is_conv ? cache.steps[ri - 1][t].spikes
                               : flatten2d(cache.steps[ri - 1][t].spikes));
      if (l.is_conv) {
        Conv2dGrads cg =
            conv2d_backward(dpre, input_t, l.weight.value, l.stride, l.pad);
        accumulate(l.weight.grad, cg.grad_weight);
        accumulate(l.bias.grad, cg.grad_bias);
        if (ri > 0) dspikes_below[t] = std::move(cg.grad_input);
      } else {
        FcGrads fg = fc_backward(dpre, input_t, l.weight.value);
        accumulate(l.weight.grad, fg.grad_weight);
        accumulate(l.bias.grad, fg.grad_bias);
        if (ri > 0) {
          dspikes_below[t] = fg.grad_input.reshaped(
              batch_dims(batch.shape[0], net_.layers[ri - 1].out_dims));
        }
      }
    }
    if (ri > 0) dspikes = std::move(dspikes_below);
  }
  return xent.loss;
}

float StbpTrainer::train_step(const Tensor& batch,
                              const std::vector<int>& labels) {
  opt_.zero_grad();
  const float loss = backward(batch, labels);
  opt_.step();
  return loss;
}

SnnPass StbpTrainer::infer_pass(const Tensor& batch) const {
  return snn_pass(net_, batch, cfg_.time_steps, /*use_fold=*/false);
}

std::vector<int> StbpTrainer::infer(const Tensor& batch) const {
  return argmax_rows(infer_pass(batch).logits);
}

}  // namespace s2a
