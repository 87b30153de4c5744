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

#include "snn2ann/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace s2a {

namespace {

constexpr char kMagic[4] = {'S', '2', 'A', 'C'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_i64(std::ostream& os, int64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  S2A_CHECK(is.good(), "corrupt checkpoint: truncated file");
  return v;
}
int64_t read_i64(std::istream& is) {
  int64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  S2A_CHECK(is.good(), "corrupt checkpoint: truncated file");
  return v;
}

void write_tensor(std::ostream& os, const std::string& name, const Tensor& t) {
  write_u32(os, uint32_t(name.size()));
  os.write(name.data(), std::streamsize(name.size()));
  write_u32(os, uint32_t(t.shape.size()));
  for (int64_t d : t.shape) write_i64(os, d);
  os.write(reinterpret_cast<const char*>(t.data.data()),
           std::streamsize(t.data.size() * sizeof(float)));
}

std::pair<std::string, Tensor> read_tensor(std::istream& is) {
  const uint32_t name_len = read_u32(is);
  S2A_CHECK(name_len < 4096, "corrupt checkpoint: implausible tensor name");
  std::string name(name_len, '\0');
  is.read(name.data(), name_len);
  S2A_CHECK(is.good(), "corrupt checkpoint: truncated file");
  const uint32_t rank = read_u32(is);
  S2A_CHECK(rank <= 8, "corrupt checkpoint: implausible tensor rank");
  std::vector<int64_t> shape(rank);
  for (uint32_t i = 0; i < rank; ++i) shape[i] = read_i64(is);
  Tensor t(shape);
  is.read(reinterpret_cast<char*>(t.data.data()),
          std::streamsize(t.data.size() * sizeof(float)));
  S2A_CHECK(is.good(), "corrupt checkpoint: truncated tensor data");
  return {name, std::move(t)};
}

std::string header_text(const Network& net, const std::string& config_text) {
  std::ostringstream oss;
  oss << "arch=" << net.spec.arch_string() << "\n";
  oss << "input=";
  for (size_t i = 0; i < net.spec.input_dims.size(); ++i) {
    if (i) oss << "x";
    oss << net.spec.input_dims[i];
  }
  oss << "\n";
  oss << "mapping=" << mapping_name(net.spec.mapping) << "\n";
  oss << "time_steps=" << net.spec.time_steps << "\n";
  oss << "bn_alpha=" << (net.layers.empty() ? 0.1f : net.layers[0].bn.alpha)
      << "\n";
  oss << "bn_eps=" << (net.layers.empty() ? 1e-5f : net.layers[0].bn.eps)
      << "\n";
  oss << "--config--\n" << config_text;
  return oss.str();
}

std::map<std::string, std::string> parse_header(const std::string& text,
                                                std::string* config_out) {
  std::map<std::string, std::string> kv;
  std::istringstream iss(text);
  std::string line;
  bool in_config = false;
  while (std::getline(iss, line)) {
    if (line == "--config--") {
      in_config = true;
      continue;
    }
    if (in_config) {
      *config_out += line + "\n";
      continue;
    }
    const size_t eq = line.find('=');
    S2A_CHECK(eq != std::string::npos,
              "corrupt checkpoint header line '" << line << "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::vector<int64_t> parse_dims(const std::string& s) {
  std::vector<int64_t> out;
  std::istringstream iss(s);
  std::string tok;
  while (std::getline(iss, tok, 'x')) out.push_back(std::stoll(tok));
  return out;
}

}  // namespace

void checkpoint_save(const Network& net, const std::string& config_text,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  S2A_CHECK(os.good(), "cannot open checkpoint path '" << path << "'");
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  const std::string header = header_text(net, config_text);
  write_u32(os, uint32_t(header.size()));
  os.write(header.data(), std::streamsize(header.size()));

  uint32_t count = 2;  // classifier weight + bias
  count += uint32_t(net.layers.size()) * 7;
  write_u32(os, count);
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const SharedLayer& l = net.layers[i];
    const std::string p = "layer" + std::to_string(i) + "/";
    write_tensor(os, p + "weight", l.weight.value);
    write_tensor(os, p + "bias", l.bias.value);
    write_tensor(os, p + "gamma", l.bn.gamma.value);
    write_tensor(os, p + "beta", l.bn.beta.value);
    write_tensor(os, p + "mu_ema", l.bn.mu_ema);
    write_tensor(os, p + "sigma_ema", l.bn.sigma_ema);
    Tensor vth({1});
    vth[0] = l.vth;
    write_tensor(os, p + "vth", vth);
  }
  write_tensor(os, "classifier/weight", net.cls_weight.value);
  write_tensor(os, "classifier/bias", net.cls_bias.value);
  S2A_CHECK(os.good(), "failed writing checkpoint '" << path << "'");
}

Checkpoint checkpoint_load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  S2A_CHECK(is.good(), "cannot open checkpoint '" << path << "'");
  char magic[4];
  is.read(magic, 4);
  S2A_CHECK(is.good() && std::memcmp(magic, kMagic, 4) == 0,
            "not a checkpoint file (bad magic)");
  const uint32_t version = read_u32(is);
  S2A_CHECK(version == kVersion, "unsupported checkpoint version " << version);
  const uint32_t header_len = read_u32(is);
  S2A_CHECK(header_len < (1u << 20), "corrupt checkpoint: implausible header");
  std::string header(header_len, '\0');
  is.read(header.data(), header_len);
  S2A_CHECK(is.good(), "corrupt checkpoint: truncated header");

  Checkpoint ckpt;
  auto kv = parse_header(header, &ckpt.config_text);

  NetworkSpec spec;
  spec.layers = NetworkSpec::parse_arch(kv.at("arch"));
  spec.input_dims = parse_dims(kv.at("input"));
  spec.mapping = mapping_from_name(kv.at("mapping"));
  spec.time_steps = std::stoll(kv.at("time_steps"));
  const float bn_alpha = std::stof(kv.at("bn_alpha"));
  const float bn_eps = std::stof(kv.at("bn_eps"));

  std::mt19937 rng(0);  // placeholder values, overwritten below
  ckpt.net = Network::build(spec, rng, VthInit{false, 1.0f}, bn_alpha, bn_eps);

  const uint32_t count = read_u32(is);
  std::map<std::string, Tensor> tensors;
  for (uint32_t i = 0; i < count; ++i) {
    auto [name, t] = read_tensor(is);
    tensors.emplace(std::move(name), std::move(t));
  }
  auto take = [&tensors](const std::string& name) -> Tensor {
    auto it = tensors.find(name);
    S2A_CHECK(it != tensors.end(),
              "checkpoint missing tensor '" << name << "'");
    Tensor t = std::move(it->second);
    tensors.erase(it);
    return t;
  };
  auto restore = [&take](const std::string& name, Tensor& dst) {
    Tensor t = take(name);
    S2A_CHECK(t.shape == dst.shape, "checkpoint tensor '"
                                        << name << "' has shape "
                                        << shape_str(t.shape) << ", expected "
                                        << shape_str(dst.shape));
    dst = std::move(t);
  };
  for (size_t i = 0; i < ckpt.net.layers.size(); ++i) {
    SharedLayer& l = ckpt.net.layers[i];
    const std::string p = "layer" + std::to_string(i) + "/";
    restore(p + "weight", l.weight.value);
    restore(p + "bias", l.bias.value);
    restore(p + "gamma", l.bn.gamma.value);
    restore(p + "beta", l.bn.beta.value);
    restore(p + "mu_ema", l.bn.mu_ema);
    restore(p + "sigma_ema", l.bn.sigma_ema);
    Tensor vth = take(p + "vth");
    S2A_CHECK(vth.numel() == 1, "bad vth record in checkpoint");
    l.vth = vth[0];
  }
  restore("classifier/weight", ckpt.net.cls_weight.value);
  restore("classifier/bias", ckpt.net.cls_bias.value);
  S2A_CHECK(tensors.empty(), "checkpoint carries unexpected extra tensors");
  return ckpt;
}

}  // namespace s2a
