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

#include "snn2ann/network.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "snn2ann/ops.hpp"

namespace s2a {

namespace {

int64_t parse_int_after(const std::string& tok, size_t& pos,
                        const std::string& what) {
  S2A_CHECK(pos < tok.size() && std::isdigit(tok[pos]) != 0,
            "arch token '" << tok << "': expected digits for " << what);
  int64_t v = 0;
  while (pos < tok.size() && std::isdigit(tok[pos]) != 0) {
    v = v * 10 + (tok[pos] - '0');
    ++pos;
  }
  return v;
}

LayerSpec parse_token(const std::string& tok) {
  LayerSpec l;
  S2A_CHECK(!tok.empty(), "empty arch token");
  if (tok.rfind("FC", 0) == 0) {
    l.kind = LayerKind::kFC;
    size_t pos = 2;
    l.out = parse_int_after(tok, pos, "fc features");
    S2A_CHECK(pos == tok.size(), "trailing characters in fc token '" << tok
                                                                     << "'");
    return l;
  }
  if (tok[0] == 'M') {
    l.kind = LayerKind::kMaxPool;
    size_t pos = 1;
    l.k = parse_int_after(tok, pos, "pool window");
    l.stride = l.k;
    if (pos < tok.size() && tok[pos] == 's') {
      ++pos;
      l.stride = parse_int_after(tok, pos, "pool stride");
    }
    S2A_CHECK(pos == tok.size(), "trailing characters in pool token '" << tok
                                                                       << "'");
    return l;
  }
  if (tok[0] == 'k') {
    l.kind = LayerKind::kConv;
    size_t pos = 1;
    l.k = parse_int_after(tok, pos, "conv kernel");
    S2A_CHECK(pos < tok.size() && tok[pos] == 'c',
              "conv token '" << tok << "' missing channel count");
    ++pos;
    l.out = parse_int_after(tok, pos, "conv channels");
    l.stride = 1;
    l.pad = 0;
    while (pos < tok.size()) {
      const char tag = tok[pos];
      ++pos;
      if (tag == 's') {
        l.stride = parse_int_after(tok, pos, "conv stride");
      } else if (tag == 'p') {
        l.pad = parse_int_after(tok, pos, "conv padding");
      } else {
        S2A_CHECK(false, "unknown conv modifier '" << tag << "' in '" << tok
                                                   << "'");
      }
    }
    return l;
  }
  S2A_CHECK(false, "unrecognized arch token '" << tok << "'");
  return l;
}

}  // namespace

std::vector<LayerSpec> NetworkSpec::parse_arch(const std::string& arch) {
  std::vector<LayerSpec> layers;
  std::string tok;
  std::istringstream iss(arch);
  while (std::getline(iss, tok, '-')) {
    layers.push_back(parse_token(tok));
  }
  S2A_CHECK(!layers.empty(), "empty architecture string");
  return layers;
}

std::string NetworkSpec::format_arch(const std::vector<LayerSpec>& layers) {
  std::ostringstream oss;
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i) oss << "-";
    const LayerSpec& l = layers[i];
    switch (l.kind) {
      case LayerKind::kConv:
        oss << "k" << l.k << "c" << l.out << "s" << l.stride << "p" << l.pad;
        break;
      case LayerKind::kMaxPool:
        oss << "M" << l.k;
        if (l.stride != l.k) oss << "s" << l.stride;
        break;
      case LayerKind::kFC:
        oss << "FC" << l.out;
        break;
    }
  }
  return oss.str();
}

std::string NetworkSpec::arch_string() const { return format_arch(layers); }

void NetworkSpec::validate() const {
  S2A_CHECK(time_steps >= 1, "time window must be at least one step");
  S2A_CHECK(!layers.empty(), "network needs at least one layer");
  S2A_CHECK(layers.back().kind == LayerKind::kFC,
            "final layer must be the FC classifier");
  S2A_CHECK(input_dims.size() == 1 || input_dims.size() == 3,
            "input dims must be {F} or {C,H,W}");
  bool seen_fc = false;
  for (size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    switch (l.kind) {
      case LayerKind::kConv:
        S2A_CHECK(!seen_fc, "conv layer after fc layer is not supported");
        S2A_CHECK(l.k >= 1 && l.out >= 1 && l.stride >= 1 && l.pad >= 0,
                  "invalid conv geometry");
        break;
      case LayerKind::kMaxPool:
        S2A_CHECK(i > 0 && layers[i - 1].kind == LayerKind::kConv,
                  "max-pool must directly follow a convolution");
        S2A_CHECK(l.k >= 1 && l.stride >= 1, "invalid pool geometry");
        break;
      case LayerKind::kFC:
        S2A_CHECK(l.out >= 1, "fc layer needs at least one output");
        seen_fc = true;
        break;
    }
  }
}

Tensor flatten2d(const Tensor& x) {
  S2A_CHECK(x.shape.size() >= 2, "flatten expects a batched tensor");
  const int64_t n = x.shape[0];
  return x.reshaped({n, x.numel() / n});
}

std::vector<int64_t> batch_dims(int64_t n, const std::vector<int64_t>& sample) {
  std::vector<int64_t> out{n};
  out.insert(out.end(), sample.begin(), sample.end());
  return out;
}

Network Network::build(const NetworkSpec& spec, std::mt19937& rng,
                       const VthInit& vth, float bn_alpha, float bn_eps) {
  spec.validate();
  Network net;
  net.spec = spec;

  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  auto init_weight = [&rng](Tensor& w, int64_t fan_in) {
    const float limit = std::sqrt(6.0f / float(fan_in));
    std::uniform_real_distribution<float> dist(-limit, limit);
    for (float& v : w.data) v = dist(rng);
  };
  auto draw_vth = [&]() {
    if (!vth.uniform) return vth.fixed;
    return std::max(unit(rng), 1e-3f);
  };

  std::vector<int64_t> cur = spec.input_dims;
  for (size_t i = 0; i + 1 < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    if (l.kind == LayerKind::kMaxPool) continue;  // merged into the conv
    SharedLayer sl;
    sl.in_dims = cur;
    if (l.kind == LayerKind::kConv) {
      S2A_CHECK(cur.size() == 3,
                "conv layer " << i << " needs {C,H,W} input, got "
                              << shape_str(cur));
      sl.is_conv = true;
      sl.k = l.k;
      sl.stride = l.stride;
      sl.pad = l.pad;
      const Conv2dDims d = conv2d_dims({1, cur[0], cur[1], cur[2]},
                                       {l.out, cur[0], l.k, l.k}, l.stride,
                                       l.pad);
      sl.pre_dims = {l.out, d.h_out, d.w_out};
      sl.weight = GradPair(Tensor({l.out, cur[0], l.k, l.k}));
      init_weight(sl.weight.value, cur[0] * l.k * l.k);
      sl.bias = GradPair(Tensor({l.out}));
      if (i + 2 < spec.layers.size() &&
          spec.layers[i + 1].kind == LayerKind::kMaxPool) {
        const LayerSpec& p = spec.layers[i + 1];
        sl.has_pool = true;
        sl.pool_k = p.k;
        sl.pool_stride = p.stride;
        S2A_CHECK(p.k <= d.h_out && p.k <= d.w_out,
                  "pool window larger than conv output at layer " << i);
        sl.out_dims = {l.out, (d.h_out - p.k) / p.stride + 1,
                       (d.w_out - p.k) / p.stride + 1};
      } else {
        sl.out_dims = sl.pre_dims;
      }
      sl.bn = BnState(l.out, bn_alpha, bn_eps);
    } else {  // hidden FC
      const int64_t fin = Tensor::numel_of(cur);
      sl.weight = GradPair(Tensor({l.out, fin}));
      init_weight(sl.weight.value, fin);
      sl.bias = GradPair(Tensor({l.out}));
      sl.pre_dims = {l.out};
      sl.out_dims = {l.out};
      sl.bn = BnState(l.out, bn_alpha, bn_eps);
    }
    sl.vth = draw_vth();
    sl.neurons = Tensor::numel_of(sl.out_dims);
    cur = sl.out_dims;
    net.layers.push_back(std::move(sl));
  }

  const LayerSpec& cls = spec.layers.back();
  net.cls_in = Tensor::numel_of(cur);
  net.classes = cls.out;
  net.cls_weight = GradPair(Tensor({net.classes, net.cls_in}));
  init_weight(net.cls_weight.value, net.cls_in);
  net.cls_bias = GradPair(Tensor({net.classes}));
  return net;
}

std::vector<GradPair*> Network::trainable_params(bool include_bn) {
  std::vector<GradPair*> out;
  for (SharedLayer& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
    if (include_bn) {
      out.push_back(&l.bn.gamma);
      out.push_back(&l.bn.beta);
    }
  }
  out.push_back(&cls_weight);
  out.push_back(&cls_bias);
  return out;
}

std::vector<std::string> Network::trainable_names(bool include_bn) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < layers.size(); ++i) {
    const std::string p = "layer" + std::to_string(i) + "/";
    out.push_back(p + "weight");
    out.push_back(p + "bias");
    if (include_bn) {
      out.push_back(p + "gamma");
      out.push_back(p + "beta");
    }
  }
  out.push_back("classifier/weight");
  out.push_back("classifier/bias");
  return out;
}

Tensor Network::station_affine(size_t idx, const Tensor& weight,
                               const Tensor& bias, const Tensor& input) const {
  const SharedLayer& l = layers[idx];
  if (l.is_conv) {
    S2A_CHECK(input.shape.size() == 4,
              "conv station " << idx << " expects [N,C,H,W] input, got "
                              << shape_str(input.shape));
    return conv2d_forward(input, weight, bias, l.stride, l.pad);
  }
  return fc_forward(flatten2d(input), weight, bias);
}

}  // namespace s2a
