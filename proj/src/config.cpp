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

#include "snn2ann/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace s2a {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int64_t to_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const int64_t out = std::stoll(v, &pos);
    S2A_CHECK(pos == v.size(), "trailing characters");
    return out;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("config key '" + key + "': bad integer '" + v + "'");
  }
}

double to_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double out = std::stod(v, &pos);
    S2A_CHECK(pos == v.size(), "trailing characters");
    return out;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("config key '" + key + "': bad number '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw Error("config key '" + key + "': expected on/off, got '" + v + "'");
}

std::vector<int64_t> parse_int_list(const std::string& v,
                                    const std::string& key) {
  std::vector<int64_t> out;
  if (trim(v).empty()) return out;
  std::istringstream iss(v);
  std::string tok;
  while (std::getline(iss, tok, ',')) out.push_back(to_int(trim(tok), key));
  return out;
}

std::string format_int_list(const std::vector<int64_t>& v) {
  std::ostringstream oss;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) oss << ",";
    oss << v[i];
  }
  return oss.str();
}

std::string fmt(double v) {
  std::ostringstream oss;
  oss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return oss.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig c;
  std::istringstream iss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      S2A_CHECK(line.back() == ']', "config line " << lineno
                                                   << ": unterminated section");
      section = line.substr(1, line.size() - 2);
      S2A_CHECK(section == "dataset" || section == "network" ||
                    section == "train" || section == "output",
                "unknown config section '" << section << "'");
      continue;
    }
    const size_t eq = line.find('=');
    S2A_CHECK(eq != std::string::npos,
              "config line " << lineno << ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "dataset.kind") {
      S2A_CHECK(val == "blobs" || val == "rings" || val == "images" ||
                    val == "idx",
                "dataset.kind must be blobs, rings, images or idx");
      c.dataset.kind = val;
    } else if (qual == "dataset.samples") {
      c.dataset.samples = to_int(val, qual);
    } else if (qual == "dataset.classes") {
      c.dataset.classes = to_int(val, qual);
    } else if (qual == "dataset.image_h") {
      c.dataset.image_h = to_int(val, qual);
    } else if (qual == "dataset.image_w") {
      c.dataset.image_w = to_int(val, qual);
    } else if (qual == "dataset.train_fraction") {
      c.dataset.train_fraction = to_double(val, qual);
    } else if (qual == "dataset.idx_images") {
      c.dataset.idx_images = val;
    } else if (qual == "dataset.idx_labels") {
      c.dataset.idx_labels = val;
    } else if (qual == "network.arch") {
      c.arch = val;
    } else if (qual == "network.input") {
      c.input = val;
    } else if (qual == "train.trainer") {
      c.train.trainer = trainer_from_name(val);
    } else if (qual == "train.epochs") {
      c.train.epochs = to_int(val, qual);
    } else if (qual == "train.batch_size") {
      c.train.batch_size = to_int(val, qual);
    } else if (qual == "train.lr") {
      c.train.adam.lr = float(to_double(val, qual));
    } else if (qual == "train.adam_beta1") {
      c.train.adam.beta1 = float(to_double(val, qual));
    } else if (qual == "train.adam_beta2") {
      c.train.adam.beta2 = float(to_double(val, qual));
    } else if (qual == "train.adam_eps") {
      c.train.adam.eps = float(to_double(val, qual));
    } else if (qual == "train.lr_milestones") {
      c.train.lr_milestones = parse_int_list(val, qual);
    } else if (qual == "train.seed") {
      c.train.seed = uint64_t(to_int(val, qual));
    } else if (qual == "train.time_steps") {
      c.train.time_steps = to_int(val, qual);
    } else if (qual == "train.ata") {
      c.train.ata_enabled = to_bool(val, qual);
    } else if (qual == "train.ata_tau") {
      c.train.ata.tau = float(to_double(val, qual));
    } else if (qual == "train.ata_alpha") {
      c.train.ata.alpha = float(to_double(val, qual));
    } else if (qual == "train.ata_epsilon") {
      c.train.ata.epsilon = float(to_double(val, qual));
    } else if (qual == "train.bn_alpha") {
      c.train.bn_alpha = float(to_double(val, qual));
    } else if (qual == "train.bn_eps") {
      c.train.bn_eps = float(to_double(val, qual));
    } else if (qual == "train.surrogate_width") {
      c.train.surrogate_width = float(to_double(val, qual));
    } else if (qual == "train.vth_init") {
      S2A_CHECK(val == "uniform" || val == "fixed",
                "train.vth_init must be uniform or fixed");
      c.train.vth_init.uniform = val == "uniform";
    } else if (qual == "train.vth_value") {
      c.train.vth_init.fixed = float(to_double(val, qual));
    } else if (qual == "output.dir") {
      c.output.dir = val;
    } else {
      S2A_CHECK(false, "unknown config key '" << qual << "'");
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  S2A_CHECK(is.good(), "cannot open config file '" << path << "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_text(buf.str());
}

void ExperimentConfig::apply_env() {
  if (const char* v = std::getenv("SNN2ANN_TRAINER")) {
    train.trainer = trainer_from_name(v);
  }
  if (const char* v = std::getenv("SNN2ANN_STEPS")) {
    train.time_steps = to_int(v, "SNN2ANN_STEPS");
  }
  if (const char* v = std::getenv("SNN2ANN_EPOCHS")) {
    train.epochs = to_int(v, "SNN2ANN_EPOCHS");
  }
  if (const char* v = std::getenv("SNN2ANN_SEED")) {
    train.seed = uint64_t(to_int(v, "SNN2ANN_SEED"));
  }
  if (const char* v = std::getenv("SNN2ANN_OUT")) {
    output.dir = v;
  }
  if (const char* v = std::getenv("SNN2ANN_NO_ATA")) {
    if (to_bool(v, "SNN2ANN_NO_ATA")) train.ata_enabled = false;
  }
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream oss;
  oss << "[dataset]\n";
  oss << "kind = " << dataset.kind << "\n";
  oss << "samples = " << dataset.samples << "\n";
  oss << "classes = " << dataset.classes << "\n";
  oss << "image_h = " << dataset.image_h << "\n";
  oss << "image_w = " << dataset.image_w << "\n";
  oss << "train_fraction = " << fmt(dataset.train_fraction) << "\n";
  oss << "idx_images = " << dataset.idx_images << "\n";
  oss << "idx_labels = " << dataset.idx_labels << "\n";
  oss << "\n[network]\n";
  oss << "arch = " << arch << "\n";
  oss << "input = " << input << "\n";
  oss << "\n[train]\n";
  oss << "trainer = " << trainer_name(train.trainer) << "\n";
  oss << "epochs = " << train.epochs << "\n";
  oss << "batch_size = " << train.batch_size << "\n";
  oss << "lr = " << fmt(train.adam.lr) << "\n";
  oss << "adam_beta1 = " << fmt(train.adam.beta1) << "\n";
  oss << "adam_beta2 = " << fmt(train.adam.beta2) << "\n";
  oss << "adam_eps = " << fmt(train.adam.eps) << "\n";
  oss << "lr_milestones = " << format_int_list(train.lr_milestones) << "\n";
  oss << "seed = " << train.seed << "\n";
  oss << "time_steps = " << train.time_steps << "\n";
  oss << "ata = " << (train.ata_enabled ? "on" : "off") << "\n";
  oss << "ata_tau = " << fmt(train.ata.tau) << "\n";
  oss << "ata_alpha = " << fmt(train.ata.alpha) << "\n";
  oss << "ata_epsilon = " << fmt(train.ata.epsilon) << "\n";
  oss << "bn_alpha = " << fmt(train.bn_alpha) << "\n";
  oss << "bn_eps = " << fmt(train.bn_eps) << "\n";
  oss << "surrogate_width = " << fmt(train.surrogate_width) << "\n";
  oss << "vth_init = " << (train.vth_init.uniform ? "uniform" : "fixed")
      << "\n";
  oss << "vth_value = " << fmt(train.vth_init.fixed) << "\n";
  oss << "\n[output]\n";
  oss << "dir = " << output.dir << "\n";
  return oss.str();
}

std::vector<int64_t> ExperimentConfig::input_dims() const {
  std::vector<int64_t> dims;
  std::istringstream iss(input);
  std::string tok;
  while (std::getline(iss, tok, 'x')) {
    dims.push_back(to_int(trim(tok), "network.input"));
  }
  S2A_CHECK(dims.size() == 1 || dims.size() == 3,
            "network.input must be F or CxHxW, got '" << input << "'");
  return dims;
}

NetworkSpec ExperimentConfig::network_spec() const {
  NetworkSpec spec;
  spec.layers = NetworkSpec::parse_arch(arch);
  spec.input_dims = input_dims();
  spec.mapping = train.trainer == TrainerKind::kS2AReSU ? MappingKind::kReSU
                                                        : MappingKind::kSTSU;
  spec.time_steps = train.time_steps;
  spec.validate();
  return spec;
}

}  // namespace s2a
