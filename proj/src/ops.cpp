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

#include "snn2ann/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snn2ann/kernels.hpp"

namespace s2a {

namespace {

// Expands one image [C_in,H,W] to patch rows [P, K] with P = h_out*w_out,
// K = C_in*k*k. Out-of-bounds (padding) positions stay zero, so the dot
// products below see the padded image without materializing it.
void im2col(const float* img, const Conv2dDims& d, float* cols) {
  const int64_t kk = d.k * d.k;
  const int64_t patch = d.c_in * kk;
  std::fill(cols, cols + d.h_out * d.w_out * patch, 0.0f);
  for (int64_t oy = 0; oy < d.h_out; ++oy) {
    for (int64_t ox = 0; ox < d.w_out; ++ox) {
      float* row = cols + (oy * d.w_out + ox) * patch;
      const int64_t iy0 = oy * d.stride - d.pad;
      const int64_t ix0 = ox * d.stride - d.pad;
      for (int64_t c = 0; c < d.c_in; ++c) {
        for (int64_t ky = 0; ky < d.k; ++ky) {
          const int64_t iy = iy0 + ky;
          if (iy < 0 || iy >= d.h) continue;
          for (int64_t kx = 0; kx < d.k; ++kx) {
            const int64_t ix = ix0 + kx;
            if (ix < 0 || ix >= d.w) continue;
            row[c * kk + ky * d.k + kx] = img[(c * d.h + iy) * d.w + ix];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds patch rows back into the image.
void col2im_add(const float* cols, const Conv2dDims& d, float* img) {
  const int64_t kk = d.k * d.k;
  const int64_t patch = d.c_in * kk;
  for (int64_t oy = 0; oy < d.h_out; ++oy) {
    for (int64_t ox = 0; ox < d.w_out; ++ox) {
      const float* row = cols + (oy * d.w_out + ox) * patch;
      const int64_t iy0 = oy * d.stride - d.pad;
      const int64_t ix0 = ox * d.stride - d.pad;
      for (int64_t c = 0; c < d.c_in; ++c) {
        for (int64_t ky = 0; ky < d.k; ++ky) {
          const int64_t iy = iy0 + ky;
          if (iy < 0 || iy >= d.h) continue;
          for (int64_t kx = 0; kx < d.k; ++kx) {
            const int64_t ix = ix0 + kx;
            if (ix < 0 || ix >= d.w) continue;
            img[(c * d.h + iy) * d.w + ix] += row[c * kk + ky * d.k + kx];
          }
        }
      }
    }
  }
}

}  // namespace

Conv2dDims conv2d_dims(const std::vector<int64_t>& input_shape,
                       const std::vector<int64_t>& weight_shape, int64_t stride,
                       int64_t pad) {
  S2A_CHECK(input_shape.size() == 4,
            "conv2d input must be [N,C,H,W], got " << shape_str(input_shape));
  S2A_CHECK(weight_shape.size() == 4 && weight_shape[2] == weight_shape[3],
            "conv2d weight must be [C_out,C_in,k,k], got "
                << shape_str(weight_shape));
  S2A_CHECK(stride >= 1, "conv2d stride must be positive");
  S2A_CHECK(pad >= 0, "conv2d padding must be nonnegative");
  Conv2dDims d;
  d.n = input_shape[0];
  d.c_in = input_shape[1];
  d.h = input_shape[2];
  d.w = input_shape[3];
  d.c_out = weight_shape[0];
  d.k = weight_shape[2];
  d.stride = stride;
  d.pad = pad;
  S2A_CHECK(weight_shape[1] == d.c_in,
            "conv2d channel mismatch: input has " << d.c_in
                << " channels, weight expects " << weight_shape[1]);
  S2A_CHECK(d.k <= d.h + 2 * pad && d.k <= d.w + 2 * pad,
            "conv2d kernel " << d.k << " larger than padded input "
                << d.h + 2 * pad << "x" << d.w + 2 * pad);
  d.h_out = (d.h + 2 * pad - d.k) / stride + 1;
  d.w_out = (d.w + 2 * pad - d.k) / stride + 1;
  return d;
}

Tensor conv2d_forward(const Tensor& input, const Tensor& weight,
                      const Tensor& bias, int64_t stride, int64_t pad) {
  const Conv2dDims d = conv2d_dims(input.shape, weight.shape, stride, pad);
  S2A_CHECK(bias.shape == std::vector<int64_t>{d.c_out},
            "conv2d bias must be [C_out], got " << shape_str(bias.shape));
  const KernelTable& kt = kernels();
  const int64_t patch = d.c_in * d.k * d.k;
  const int64_t p_total = d.h_out * d.w_out;
  Tensor out({d.n, d.c_out, d.h_out, d.w_out});
  std::vector<float> cols(static_cast<size_t>(p_total * patch));
  for (int64_t n = 0; n < d.n; ++n) {
    im2col(input.ptr() + n * d.c_in * d.h * d.w, d, cols.data());
    float* out_n = out.ptr() + n * d.c_out * p_total;
    for (int64_t c = 0; c < d.c_out; ++c) {
      const float* wrow = weight.ptr() + c * patch;
      for (int64_t p = 0; p < p_total; ++p) {
        out_n[c * p_total + p] =
            kt.dot(wrow, cols.data() + p * patch, patch) + bias[c];
      }
    }
  }
  return out;
}

Conv2dGrads conv2d_backward(const Tensor& grad_out, const Tensor& input,
                            const Tensor& weight, int64_t stride, int64_t pad) {
  const Conv2dDims d = conv2d_dims(input.shape, weight.shape, stride, pad);
  const int64_t p_total = d.h_out * d.w_out;
  S2A_CHECK(grad_out.shape ==
                (std::vector<int64_t>{d.n, d.c_out, d.h_out, d.w_out}),
            "conv2d grad_out shape " << shape_str(grad_out.shape)
                << " does not match forward output");
  const KernelTable& kt = kernels();
  const int64_t patch = d.c_in * d.k * d.k;
  Conv2dGrads g;
  g.grad_input = Tensor(input.shape);
  g.grad_weight = Tensor(weight.shape);
  g.grad_bias = Tensor({d.c_out});
  std::vector<float> cols(static_cast<size_t>(p_total * patch));
  std::vector<float> grad_cols(static_cast<size_t>(p_total * patch));
  for (int64_t n = 0; n < d.n; ++n) {
    im2col(input.ptr() + n * d.c_in * d.h * d.w, d, cols.data());
    std::fill(grad_cols.begin(), grad_cols.end(), 0.0f);
    const float* go_n = grad_out.ptr() + n * d.c_out * p_total;
    for (int64_t c = 0; c < d.c_out; ++c) {
      const float* go_row = go_n + c * p_total;
      g.grad_bias[c] += kt.sum(go_row, p_total);
      float* gw_row = g.grad_weight.ptr() + c * patch;
      const float* w_row = weight.ptr() + c * patch;
      for (int64_t p = 0; p < p_total; ++p) {
        const float go = go_row[p];
        kt.axpy(go, cols.data() + p * patch, gw_row, patch);
        kt.axpy(go, w_row, grad_cols.data() + p * patch, patch);
      }
    }
    col2im_add(grad_cols.data(), d, g.grad_input.ptr() + n * d.c_in * d.h * d.w);
  }
  return g;
}

PoolResult maxpool2d(const Tensor& input, int64_t k, int64_t stride) {
  S2A_CHECK(input.shape.size() == 4,
            "maxpool input must be [N,C,H,W], got " << shape_str(input.shape));
  S2A_CHECK(k >= 1 && stride >= 1, "maxpool k and stride must be positive");
  const int64_t n = input.shape[0], c = input.shape[1], h = input.shape[2],
                w = input.shape[3];
  S2A_CHECK(k <= h && k <= w, "maxpool window " << k << " larger than input "
                                                << h << "x" << w);
  const int64_t ho = (h - k) / stride + 1;
  const int64_t wo = (w - k) / stride + 1;
  PoolResult r;
  r.output = Tensor({n, c, ho, wo});
  r.argmax.resize(static_cast<size_t>(n * c * ho * wo));
  int64_t oi = 0;
  for (int64_t ni = 0; ni < n; ++ni) {
    for (int64_t ci = 0; ci < c; ++ci) {
      const int64_t plane = (ni * c + ci) * h * w;
      for (int64_t oy = 0; oy < ho; ++oy) {
        for (int64_t ox = 0; ox < wo; ++ox, ++oi) {
          float best = -std::numeric_limits<float>::infinity();
          int64_t best_idx = -1;
          for (int64_t ky = 0; ky < k; ++ky) {
            for (int64_t kx = 0; kx < k; ++kx) {
              const int64_t idx =
                  plane + (oy * stride + ky) * w + (ox * stride + kx);
              if (input[static_cast<size_t>(idx)] > best) {
                best = input[static_cast<size_t>(idx)];
                best_idx = idx;
              }
            }
          }
          r.output[static_cast<size_t>(oi)] = best;
          r.argmax[static_cast<size_t>(oi)] = best_idx;
        }
      }
    }
  }
  return r;
}

Tensor maxpool2d_backward(const Tensor& grad_out,
                          const std::vector<int64_t>& argmax,
                          const std::vector<int64_t>& input_shape) {
  S2A_CHECK(static_cast<size_t>(grad_out.numel()) == argmax.size(),
            "maxpool backward: grad/argmax size mismatch");
  Tensor grad_in(input_shape);
  for (size_t i = 0; i < argmax.size(); ++i) {
    grad_in[static_cast<size_t>(argmax[i])] += grad_out[i];
  }
  return grad_in;
}

Tensor fc_forward(const Tensor& input, const Tensor& weight,
                  const Tensor& bias) {
  S2A_CHECK(input.shape.size() == 2, "fc input must be [N,F_in], got "
                                         << shape_str(input.shape));
  S2A_CHECK(weight.shape.size() == 2 && weight.shape[1] == input.shape[1],
            "fc weight " << shape_str(weight.shape)
                << " incompatible with input " << shape_str(input.shape));
  const int64_t n = input.shape[0], fin = input.shape[1],
                fout = weight.shape[0];
  S2A_CHECK(bias.shape == std::vector<int64_t>{fout},
            "fc bias must be [F_out], got " << shape_str(bias.shape));
  const KernelTable& kt = kernels();
  Tensor out({n, fout});
  for (int64_t i = 0; i < n; ++i) {
    const float* in_row = input.ptr() + i * fin;
    for (int64_t j = 0; j < fout; ++j) {
      out[static_cast<size_t>(i * fout + j)] =
          kt.dot(in_row, weight.ptr() + j * fin, fin) + bias[j];
    }
  }
  return out;
}

FcGrads fc_backward(const Tensor& grad_out, const Tensor& input,
                    const Tensor& weight) {
  const int64_t n = input.shape[0], fin = input.shape[1],
                fout = weight.shape[0];
  S2A_CHECK(grad_out.shape == (std::vector<int64_t>{n, fout}),
            "fc grad_out shape " << shape_str(grad_out.shape)
                << " does not match forward output");
  const KernelTable& kt = kernels();
  FcGrads g;
  g.grad_input = Tensor(input.shape);
  g.grad_weight = Tensor(weight.shape);
  g.grad_bias = Tensor({fout});
  for (int64_t i = 0; i < n; ++i) {
    const float* in_row = input.ptr() + i * fin;
    float* gin_row = g.grad_input.ptr() + i * fin;
    for (int64_t j = 0; j < fout; ++j) {
      const float go = grad_out[static_cast<size_t>(i * fout + j)];
      g.grad_bias[j] += go;
      kt.axpy(go, weight.ptr() + j * fin, gin_row, fin);
      kt.axpy(go, in_row, g.grad_weight.ptr() + j * fin, fin);
    }
  }
  return g;
}

Tensor relu(const Tensor& x) {
  Tensor y(x.shape);
  kernels().relu(x.ptr(), y.ptr(), static_cast<size_t>(x.numel()));
  return y;
}

void accumulate(Tensor& dst, const Tensor& src) {
  S2A_CHECK(dst.same_shape(src), "accumulate shape mismatch");
  kernels().axpy(1.0f, src.ptr(), dst.ptr(),
                 static_cast<size_t>(dst.numel()));
}

Tensor relu_backward(const Tensor& grad_out, const Tensor& relu_out) {
  S2A_CHECK(grad_out.same_shape(relu_out), "relu backward shape mismatch");
  Tensor g(grad_out.shape);
  for (size_t i = 0; i < g.data.size(); ++i) {
    g[i] = relu_out[i] > 0.0f ? grad_out[i] : 0.0f;
  }
  return g;
}

XentResult softmax_xent(const Tensor& logits, const std::vector<int>& labels) {
  S2A_CHECK(logits.shape.size() == 2, "softmax_xent logits must be [N,K]");
  const int64_t n = logits.shape[0], k = logits.shape[1];
  S2A_CHECK(static_cast<int64_t>(labels.size()) == n,
            "softmax_xent: " << labels.size() << " labels for " << n
                             << " rows");
  XentResult r;
  r.grad_logits = Tensor(logits.shape);
  double loss = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const int label = labels[static_cast<size_t>(i)];
    S2A_CHECK(label >= 0 && label < k,
              "label " << label << " out of range [0," << k << ")");
    const float* row = logits.ptr() + i * k;
    float mx = row[0];
    for (int64_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double denom = 0.0;
    for (int64_t j = 0; j < k; ++j) denom += std::exp(double(row[j]) - mx);
    loss -= (double(row[label]) - mx) - std::log(denom);
    float* grow = r.grad_logits.ptr() + i * k;
    for (int64_t j = 0; j < k; ++j) {
      const float p = float(std::exp(double(row[j]) - mx) / denom);
      grow[j] = (p - (j == label ? 1.0f : 0.0f)) / float(n);
    }
  }
  r.loss = float(loss / double(n));
  return r;
}

void adam_step(GradPair& param, Tensor& m, Tensor& v, int64_t t,
               const AdamConfig& cfg, const std::string& name) {
  S2A_CHECK(t >= 1, "adam step index must be >= 1");
  S2A_CHECK(param.grad.all_finite(),
            "non-finite gradient for parameter '" << name << "'");
  AdamScalars s;
  s.lr = cfg.lr;
  s.beta1 = cfg.beta1;
  s.beta2 = cfg.beta2;
  s.eps = cfg.eps;
  s.bias1 = 1.0f - std::pow(cfg.beta1, float(t));
  s.bias2 = 1.0f - std::pow(cfg.beta2, float(t));
  kernels().adam(param.value.ptr(), param.grad.ptr(), m.ptr(), v.ptr(),
                 static_cast<size_t>(param.value.numel()), s);
}

void AdamOptimizer::attach(GradPair* param, std::string name) {
  Slot s;
  s.param = param;
  s.name = std::move(name);
  s.m = Tensor(param->value.shape);
  s.v = Tensor(param->value.shape);
  slots_.push_back(std::move(s));
}

void AdamOptimizer::step() {
  ++t_;
  for (Slot& s : slots_) {
    adam_step(*s.param, s.m, s.v, t_, cfg_, s.name);
  }
}

void AdamOptimizer::zero_grad() {
  for (Slot& s : slots_) s.param->zero_grad();
}

}  // namespace s2a
