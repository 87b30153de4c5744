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

#include "snn2ann/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>

namespace s2a {

namespace {

constexpr uint32_t kImagesMagic = 0x00000803;
constexpr uint32_t kLabelsMagic = 0x00000801;

uint32_t read_be32(std::istream& is, const char* what) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  S2A_CHECK(is.good(), "truncated IDX file while reading " << what);
  return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) |
         (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

void write_be32(std::ostream& os, uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

Tensor Dataset::gather(const std::vector<int64_t>& indices) const {
  const int64_t stride = Tensor::numel_of(sample_dims);
  Tensor out(
      [&] {
        std::vector<int64_t> s{static_cast<int64_t>(indices.size())};
        s.insert(s.end(), sample_dims.begin(), sample_dims.end());
        return s;
      }());
  for (size_t i = 0; i < indices.size(); ++i) {
    const int64_t idx = indices[i];
    S2A_CHECK(idx >= 0 && idx < size(), "dataset index out of range");
    std::copy_n(features.ptr() + idx * stride, stride,
                out.ptr() + int64_t(i) * stride);
  }
  return out;
}

std::vector<int> Dataset::gather_labels(
    const std::vector<int64_t>& indices) const {
  std::vector<int> out(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    out[i] = labels[static_cast<size_t>(indices[i])];
  }
  return out;
}

std::pair<Dataset, Dataset> Dataset::split(double train_fraction) const {
  S2A_CHECK(train_fraction > 0.0 && train_fraction < 1.0,
            "train fraction must lie in (0,1)");
  const int64_t n_train =
      std::max<int64_t>(1, int64_t(double(size()) * train_fraction));
  S2A_CHECK(n_train < size(), "split leaves an empty evaluation set");
  std::vector<int64_t> head(static_cast<size_t>(n_train));
  std::vector<int64_t> tail(static_cast<size_t>(size() - n_train));
  for (int64_t i = 0; i < n_train; ++i) head[size_t(i)] = i;
  for (int64_t i = n_train; i < size(); ++i) tail[size_t(i - n_train)] = i;
  Dataset a{gather(head), gather_labels(head), classes, sample_dims};
  Dataset b{gather(tail), gather_labels(tail), classes, sample_dims};
  return {std::move(a), std::move(b)};
}

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path) {
  std::ifstream imgs(images_path, std::ios::binary);
  S2A_CHECK(imgs.good(), "cannot open IDX images '" << images_path << "'");
  const uint32_t imagic = read_be32(imgs, "images magic");
  S2A_CHECK(imagic == kImagesMagic,
            "bad IDX images magic 0x" << std::hex << imagic);
  const uint32_t n = read_be32(imgs, "image count");
  const uint32_t h = read_be32(imgs, "image rows");
  const uint32_t w = read_be32(imgs, "image cols");
  std::vector<unsigned char> pixels(size_t(n) * h * w);
  imgs.read(reinterpret_cast<char*>(pixels.data()),
            std::streamsize(pixels.size()));
  S2A_CHECK(imgs.gcount() == std::streamsize(pixels.size()),
            "truncated IDX image payload in '" << images_path << "'");

  std::ifstream labs(labels_path, std::ios::binary);
  S2A_CHECK(labs.good(), "cannot open IDX labels '" << labels_path << "'");
  const uint32_t lmagic = read_be32(labs, "labels magic");
  S2A_CHECK(lmagic == kLabelsMagic,
            "bad IDX labels magic 0x" << std::hex << lmagic);
  const uint32_t ln = read_be32(labs, "label count");
  S2A_CHECK(ln == n, "IDX count mismatch: " << n << " images vs " << ln
                                            << " labels");
  std::vector<unsigned char> raw_labels(ln);
  labs.read(reinterpret_cast<char*>(raw_labels.data()),
            std::streamsize(raw_labels.size()));
  S2A_CHECK(labs.gcount() == std::streamsize(raw_labels.size()),
            "truncated IDX label payload in '" << labels_path << "'");

  Dataset ds;
  ds.sample_dims = {1, int64_t(h), int64_t(w)};
  ds.features = Tensor({int64_t(n), 1, int64_t(h), int64_t(w)});
  for (size_t i = 0; i < pixels.size(); ++i) {
    ds.features[i] = float(pixels[i]) / 255.0f;
  }
  ds.labels.resize(n);
  int max_label = 0;
  for (size_t i = 0; i < raw_labels.size(); ++i) {
    ds.labels[i] = int(raw_labels[i]);
    max_label = std::max(max_label, ds.labels[i]);
  }
  ds.classes = max_label + 1;
  return ds;
}

void write_idx(const Dataset& ds, const std::string& images_path,
               const std::string& labels_path) {
  S2A_CHECK(ds.sample_dims.size() == 3 && ds.sample_dims[0] == 1,
            "write_idx expects single-channel image data");
  std::ofstream imgs(images_path, std::ios::binary);
  S2A_CHECK(imgs.good(), "cannot write IDX images '" << images_path << "'");
  write_be32(imgs, kImagesMagic);
  write_be32(imgs, uint32_t(ds.size()));
  write_be32(imgs, uint32_t(ds.sample_dims[1]));
  write_be32(imgs, uint32_t(ds.sample_dims[2]));
  for (float v : ds.features.data) {
    const float clamped = std::min(std::max(v, 0.0f), 1.0f);
    const unsigned char b =
        static_cast<unsigned char>(std::lround(clamped * 255.0f));
    imgs.write(reinterpret_cast<const char*>(&b), 1);
  }
  std::ofstream labs(labels_path, std::ios::binary);
  S2A_CHECK(labs.good(), "cannot write IDX labels '" << labels_path << "'");
  write_be32(labs, kLabelsMagic);
  write_be32(labs, uint32_t(ds.size()));
  for (int l : ds.labels) {
    const unsigned char b = static_cast<unsigned char>(l);
    labs.write(reinterpret_cast<const char*>(&b), 1);
  }
}

Dataset synth_blobs(int64_t n, int64_t classes, uint64_t seed) {
  S2A_CHECK(classes >= 2, "blobs need at least two classes");
  S2A_CHECK(n >= classes, "need at least one sample per class");
  std::mt19937 rng(static_cast<uint32_t>(seed));
  std::normal_distribution<float> noise(0.0f, 0.45f);
  Dataset ds;
  ds.classes = classes;
  ds.sample_dims = {2};
  ds.features = Tensor({n, 2});
  ds.labels.resize(static_cast<size_t>(n));
  const float radius = 4.0f;
  for (int64_t i = 0; i < n; ++i) {
    const int c = int(i % classes);
    const float angle = 2.0f * float(M_PI) * float(c) / float(classes);
    ds.features[size_t(2 * i)] = radius * std::cos(angle) + noise(rng);
    ds.features[size_t(2 * i + 1)] = radius * std::sin(angle) + noise(rng);
    ds.labels[size_t(i)] = c;
  }
  return ds;
}

Dataset synth_two_rings(int64_t n, uint64_t seed) {
  S2A_CHECK(n >= 2, "rings need at least two samples");
  std::mt19937 rng(static_cast<uint32_t>(seed));
  std::uniform_real_distribution<float> angle(0.0f, 2.0f * float(M_PI));
  std::normal_distribution<float> jitter(0.0f, 0.1f);
  Dataset ds;
  ds.classes = 2;
  ds.sample_dims = {2};
  ds.features = Tensor({n, 2});
  ds.labels.resize(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const int c = int(i % 2);
    const float r = (c == 0 ? 1.0f : 2.2f) + jitter(rng);
    const float a = angle(rng);
    ds.features[size_t(2 * i)] = r * std::cos(a);
    ds.features[size_t(2 * i + 1)] = r * std::sin(a);
    ds.labels[size_t(i)] = c;
  }
  return ds;
}

Dataset synth_images(int64_t n, int64_t classes, uint64_t seed, int64_t h,
                     int64_t w) {
  S2A_CHECK(classes >= 2 && n >= classes, "bad synthetic image parameters");
  S2A_CHECK(h >= 4 && w >= 4, "synthetic images need at least 4x4 pixels");
  std::mt19937 rng(static_cast<uint32_t>(seed));
  std::uniform_real_distribution<float> bg(0.0f, 0.25f);
  std::uniform_real_distribution<float> fg(0.7f, 1.0f);
  std::uniform_int_distribution<int> shift(-1, 1);
  Dataset ds;
  ds.classes = classes;
  ds.sample_dims = {1, h, w};
  ds.features = Tensor({n, 1, h, w});
  ds.labels.resize(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const int c = int(i % classes);
    ds.labels[size_t(i)] = c;
    float* img = ds.features.ptr() + i * h * w;
    for (int64_t p = 0; p < h * w; ++p) img[p] = bg(rng);
    // Class pattern: a bright band whose row and orientation depend on the
    // class, jittered by one pixel per sample.
    const bool vertical = (c % 2) == 1;
    const int64_t lanes = vertical ? w : h;
    const int64_t band = 1 + (int64_t(c / 2) * (lanes - 2)) /
                                 std::max<int64_t>(1, (classes + 1) / 2);
    const int64_t pos =
        std::clamp<int64_t>(band + shift(rng), 0, lanes - 1);
    if (vertical) {
      for (int64_t y = 0; y < h; ++y) img[y * w + pos] = fg(rng);
    } else {
      for (int64_t x = 0; x < w; ++x) img[pos * w + x] = fg(rng);
    }
  }
  return ds;
}

}  // namespace s2a
