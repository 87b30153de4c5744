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

// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "snn2ann/checkpoint.hpp"
#include "snn2ann/experiment.hpp"
#include "snn2ann/kernels.hpp"
#include "snn2ann/train.hpp"

using namespace s2a;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
            << name << " — " << detail << "\n";
  if (!pass) ++g_failures;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Tensor random_tensor(std::vector<int64_t> shape, std::mt19937& rng, float lo,
                     float hi) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& v : t.data) v = dist(rng);
  return t;
}

void randomize_bn(Network& net, std::mt19937& rng) {
  std::uniform_real_distribution<float> g(0.6f, 1.6f), b(-0.4f, 0.4f),
      mu(-0.3f, 0.3f), sig(0.5f, 1.5f);
  for (SharedLayer& l : net.layers) {
    for (int64_t c = 0; c < l.bn.channels(); ++c) {
      l.bn.gamma.value[size_t(c)] = g(rng);
      l.bn.beta.value[size_t(c)] = b(rng);
      l.bn.mu_ema[size_t(c)] = mu(rng);
      l.bn.sigma_ema[size_t(c)] = sig(rng);
    }
  }
}

NetworkSpec spec_of(const std::string& arch, std::vector<int64_t> input,
                    MappingKind mk, int64_t T) {
  NetworkSpec s;
  s.layers = NetworkSpec::parse_arch(arch);
  s.input_dims = std::move(input);
  s.mapping = mk;
  s.time_steps = T;
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------

void criterion_1_scope() {
  report(1, "scope",
         true,
         "paper-scale benchmark results are out of scope; acceptance is "
         "property-based with desk-scale analogues (criteria 2-11)");
}

void criterion_2_stsu_equivalence() {
  const double t0 = now_seconds();
  std::mt19937 seeds(2024);
  const std::vector<std::pair<std::string, std::vector<int64_t>>> shapes = {
      {"FC8-FC3", {5}},
      {"FC7-FC6-FC3", {4}},
      {"FC5-FC5-FC5-FC2", {3}},
      {"k3c4s1p1-M2-FC3", {1, 8, 8}},
      {"k3c3s1p0-k3c4s1p0-FC4", {2, 9, 9}},
  };
  int nets = 0, exact = 0;
  std::uniform_int_distribution<int64_t> tdist(1, 6);
  while (nets < 100) {
    for (const auto& [arch, input] : shapes) {
      const int64_t T = tdist(seeds);
      NetworkSpec spec = spec_of(arch, input, MappingKind::kSTSU, T);
      std::mt19937 rng(seeds());
      Network net =
          Network::build(spec, rng, VthInit{true, 1.0f}, 0.1f, 1e-5f);
      randomize_bn(net, rng);
      Tensor batch =
          random_tensor(batch_dims(3, input), rng, -1.0f, 1.0f);
      ForwardTrace trace = s2a_forward_pass(net, batch, T);
      bool ok = true;
      for (const LayerTrace& lt : trace.layers) {
        ok = ok && lt.x_q.shape == lt.counts.shape &&
             lt.x_q.data == lt.counts.data && lt.counts.is_integral();
      }
      ++nets;
      exact += ok ? 1 : 0;
    }
  }
  const double secs = now_seconds() - t0;
  std::ostringstream d;
  d << exact << "/" << nets
    << " networks with ANN activations == SNN counts (zero tolerance), "
    << std::fixed << secs << "s";
  report(2, "STSU exact branch equivalence", exact == nets && secs < 60.0,
         d.str());
}

void criterion_3_if_oracle() {
  const double t0 = now_seconds();
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> tdist(1, 8), ndist(1, 24);
  std::uniform_real_distribution<float> vdist(0.05f, 1.5f),
      xdist(-0.5f, 1.5f);
  int cases = 0, exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int T = tdist(rng), n = ndist(rng);
    const float vth = vdist(rng);
    std::vector<Tensor> inputs;
    for (int t = 0; t < T; ++t) {
      inputs.push_back(random_tensor({n}, rng, -0.5f, 1.5f));
    }
    IFNeuronLayer layer(ResetMode::kHard, vth);
    WindowResult w = run_window(layer, inputs);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      float u = 0.0f, o = 0.0f;
      float count = 0.0f;
      for (int t = 0; t < T; ++t) {
        u = u * (1.0f - o) + inputs[size_t(t)][size_t(i)];
        o = u > vth ? 1.0f : 0.0f;
        ok = ok && w.spike_trains[size_t(t)][size_t(i)] == o;
        count += o;
      }
      ok = ok && w.acc.counts[size_t(i)] == count &&
           layer.membrane()[size_t(i)] == u;
    }
    ++cases;
    exact += ok ? 1 : 0;
  }
  const double secs = now_seconds() - t0;
  std::ostringstream d;
  d << exact << "/" << cases
    << " random windows match the scalar per-neuron oracle exactly, "
    << std::fixed << secs << "s";
  report(3, "IF oracle equivalence", exact == cases && secs < 60.0, d.str());
}

void criterion_4_rate_identity() {
  std::mt19937 rng(4);
  std::uniform_real_distribution<float> vdist(0.3f, 1.5f);
  float worst_residual = 0.0f;
  int improved = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    std::uniform_int_distribution<int64_t> dim(1, 12);
    const int64_t fin = dim(rng), fout = dim(rng);
    Tensor w = random_tensor({fout, fin}, rng, -1.0f, 1.0f);
    Tensor b = random_tensor({fout}, rng, -0.2f, 0.2f);
    Tensor rates = random_tensor({fin}, rng, 0.0f, 1.0f);
    const float vth = vdist(rng);
    RateIdentityResult r8 = rate_identity_check(w, b, rates, vth, 8);
    worst_residual = std::max(worst_residual, r8.max_abs_residual);
    RateIdentityResult r16 = rate_identity_check(w, b, rates, vth, 16);
    RateIdentityResult r128 = rate_identity_check(w, b, rates, vth, 128);
    if (r128.max_clip_gap <= r16.max_clip_gap) ++improved;
  }
  std::ostringstream d;
  d << "max residual " << worst_residual << " (<= 1e-5); clip gap shrank in "
    << improved << "/" << trials << " trials (need >= " << trials * 95 / 100
    << ")";
  report(4, "soft-reset rate identity",
         worst_residual <= 1e-5f && improved >= trials * 95 / 100, d.str());
}

void criterion_5_gradients() {
  bool pass = true;
  std::ostringstream d;
  // Part A: full-system gradients vs FD of the counts-frozen surrogate.
  std::mt19937 rng(5);
  int checked = 0, agreed = 0;
  for (MappingKind mk : {MappingKind::kSTSU, MappingKind::kReSU}) {
    const TrainerKind kind = mk == MappingKind::kReSU
                                 ? TrainerKind::kS2AReSU
                                 : TrainerKind::kS2ASTSU;
    for (const auto& [arch, input] :
         std::vector<std::pair<std::string, std::vector<int64_t>>>{
             {"FC6-FC5-FC3", {4}}, {"k3c3s1p1-M2-FC3", {1, 6, 6}}}) {
      NetworkSpec spec = spec_of(arch, input, mk, 4);
      TrainConfig cfg;
      cfg.trainer = kind;
      cfg.time_steps = 4;
      std::mt19937 net_rng(91);
      Network net =
          Network::build(spec, net_rng, VthInit{true, 1.0f}, 0.1f, 1e-5f);
      int64_t params = 0;
      for (GradPair* p : net.trainable_params(true)) {
        params += p->value.numel();
      }
      if (params > 1000) {
        pass = false;
        break;
      }
      S2ATrainer trainer(std::move(net), cfg);
      randomize_bn(trainer.net(), rng);
      Tensor batch = random_tensor(batch_dims(4, input), rng, -1.0f, 1.0f);
      std::vector<int> labels = {0, 1, 2, 1};
      ForwardTrace trace = trainer.forward(batch);
      trainer.optimizer().zero_grad();
      trainer.backward(trace, labels);
      std::vector<Tensor> counts, offsets;
      for (const LayerTrace& lt : trace.layers) {
        counts.push_back(lt.counts);
        Tensor off = lt.x_q;
        for (size_t i = 0; i < off.data.size(); ++i) off[i] -= lt.x_r[i];
        offsets.push_back(std::move(off));
      }
      auto fd_at = [&](GradPair& p, size_t i, float h) {
        const float keep = p.value[i];
        p.value[i] = keep + h;
        const double up = s2a_surrogate_loss(trainer.net(), batch, labels,
                                             counts, offsets);
        p.value[i] = keep - h;
        const double dn = s2a_surrogate_loss(trainer.net(), batch, labels,
                                             counts, offsets);
        p.value[i] = keep;
        return (up - dn) / (2.0 * double(h));
      };
      auto check = [&](GradPair& p) {
        for (size_t i = 0; i < p.value.data.size(); ++i) {
          ++checked;
          // Retry at a smaller step when the secant straddles a relu/pool
          // kink; a wrong gradient fails at both step sizes.
          if (rel_close(fd_at(p, i, 1e-3f), double(p.grad[i]), 1e-3) ||
              rel_close(fd_at(p, i, 5e-4f), double(p.grad[i]), 1e-3)) {
            ++agreed;
          }
        }
      };
      for (SharedLayer& l : trainer.net().layers) {
        check(l.weight);
        check(l.bias);
        check(l.bn.gamma);
        check(l.bn.beta);
      }
      check(trainer.net().cls_weight);
      check(trainer.net().cls_bias);
    }
  }
  pass = pass && checked > 0 && agreed == checked;
  d << agreed << "/" << checked
    << " parameter entries match FD of the counts-frozen surrogate at 1e-3";

  // Part B: standalone tensor-core backward checks.
  int op_checked = 0, op_agreed = 0;
  const float h = 1e-3f;
  auto sum_all = [](const Tensor& t) {
    double s = 0;
    for (float v : t.data) s += v;
    return s;
  };
  for (int trial = 0; trial < 100; ++trial) {
    Tensor input = random_tensor({1, 2, 5, 5}, rng, -1.0f, 1.0f);
    Tensor weight = random_tensor({2, 2, 3, 3}, rng, -1.0f, 1.0f);
    Tensor bias = random_tensor({2}, rng, -1.0f, 1.0f);
    Tensor ones({1, 2, 3, 3});
    ones.fill(1.0f);
    Conv2dGrads g = conv2d_backward(ones, input, weight, 1, 0);
    std::uniform_int_distribution<size_t> pick(0, weight.data.size() - 1);
    const size_t i = pick(rng);
    const float keep = weight[i];
    weight[i] = keep + h;
    const double up = sum_all(conv2d_forward(input, weight, bias, 1, 0));
    weight[i] = keep - h;
    const double dn = sum_all(conv2d_forward(input, weight, bias, 1, 0));
    weight[i] = keep;
    ++op_checked;
    if (rel_close((up - dn) / (2.0 * double(h)), double(g.grad_weight[i]),
                  1e-3)) {
      ++op_agreed;
    }

    Tensor fin = random_tensor({3, 6}, rng, -1.0f, 1.0f);
    Tensor fw = random_tensor({4, 6}, rng, -1.0f, 1.0f);
    Tensor fb = random_tensor({4}, rng, -1.0f, 1.0f);
    Tensor fones({3, 4});
    fones.fill(1.0f);
    FcGrads fg = fc_backward(fones, fin, fw);
    std::uniform_int_distribution<size_t> fpick(0, fw.data.size() - 1);
    const size_t j = fpick(rng);
    const float fkeep = fw[j];
    fw[j] = fkeep + h;
    const double fup = sum_all(fc_forward(fin, fw, fb));
    fw[j] = fkeep - h;
    const double fdn = sum_all(fc_forward(fin, fw, fb));
    fw[j] = fkeep;
    ++op_checked;
    if (rel_close((fup - fdn) / (2.0 * double(h)), double(fg.grad_weight[j]),
                  1e-3)) {
      ++op_agreed;
    }
  }
  pass = pass && op_agreed == op_checked;
  d << "; tensor-core FD " << op_agreed << "/" << op_checked;
  report(5, "gradient correctness", pass, d.str());
}

void criterion_6_fold_consistency() {
  std::mt19937 rng(6);
  int checked = 0, ok = 0;
  double worst = 0.0;
  for (int64_t T : {1, 2, 5, 8}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<int64_t> dim(1, 8);
      const int64_t fin = dim(rng), fout = dim(rng), n = dim(rng);
      BnState bn(fout, 0.1f, 1e-5f);
      std::uniform_real_distribution<float> g(0.5f, 2.0f), b(-1.0f, 1.0f),
          mu(-0.5f, 0.5f), sig(0.4f, 1.6f);
      for (int64_t c = 0; c < fout; ++c) {
        bn.gamma.value[size_t(c)] = g(rng);
        bn.beta.value[size_t(c)] = b(rng);
        bn.mu_ema[size_t(c)] = mu(rng);
        bn.sigma_ema[size_t(c)] = sig(rng);
      }
      Tensor w = random_tensor({fout, fin}, rng, -1.0f, 1.0f);
      Tensor bias = random_tensor({fout}, rng, -1.0f, 1.0f);
      FoldedParams f = fold_weights(w, bias, bn, T);
      std::vector<Tensor> xs;
      Tensor xsum({n, fin});
      for (int64_t t = 0; t < T; ++t) {
        xs.push_back(random_tensor({n, fin}, rng, -1.0f, 1.0f));
        accumulate(xsum, xs.back());
      }
      Tensor lhs({n, fout});
      for (int64_t t = 0; t < T; ++t) {
        accumulate(lhs, fc_forward(xs[size_t(t)], f.weight, f.bias));
      }
      Tensor rhs = bn_apply(fc_forward(xsum, w, bias), bn);
      bool all = true;
      for (size_t i = 0; i < lhs.data.size(); ++i) {
        const double scale =
            std::max({1.0, std::fabs(double(lhs[i])), std::fabs(double(rhs[i]))});
        const double err = std::fabs(double(lhs[i]) - double(rhs[i])) / scale;
        worst = std::max(worst, err);
        all = all && err <= 1e-5;
      }
      ++checked;
      ok += all ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << ok << "/" << checked << " layers, worst relative gap " << worst
    << " (tolerance 1e-5, T in {1,2,5,8})";
  report(6, "BN fold-consistency", ok == checked, d.str());
}

void criterion_7_ata() {
  // A real training run: every layer's threshold trajectory must be
  // non-decreasing and every step an exact multiply by 1 or 1+tau*(1-alpha).
  ExperimentConfig cfg;
  cfg.dataset.kind = "images";
  cfg.dataset.samples = 200;
  cfg.dataset.classes = 3;
  cfg.arch = "k3c4s1p0-M2-FC8-FC3";
  cfg.input = "1x10x10";
  cfg.train.trainer = TrainerKind::kS2ASTSU;
  cfg.train.epochs = 6;
  cfg.train.seed = 7;
  Experiment exp(cfg);
  RunArtifacts art = exp.run(nullptr);
  const auto& traj = art.metrics.vth_trajectory;
  const float grow =
      1.0f + cfg.train.ata.tau * (1.0f - cfg.train.ata.alpha);
  bool mono = !traj.empty();
  bool exact = true;
  int grew = 0;
  for (size_t it = 1; it < traj.size(); ++it) {
    for (size_t l = 0; l < traj[it].size(); ++l) {
      const float prev = traj[it - 1][l];
      const float cur = traj[it][l];
      mono = mono && cur >= prev && cur > 0.0f;
      const bool unchanged = cur == prev;
      const bool scaled = cur == prev * grow;
      exact = exact && (unchanged || scaled);
      grew += scaled ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << traj.size() << " iterations x " << (traj.empty() ? 0 : traj[0].size())
    << " layers, " << grew << " growth events, factor 1+tau*(1-alpha) = "
    << grow;
  report(7, "ATA monotone threshold growth", mono && exact && grew > 0,
         d.str());
}

struct ConvergenceRun {
  double accuracy;
  double sec_per_epoch;
};

ConvergenceRun blobs_run(TrainerKind kind, uint64_t seed) {
  ExperimentConfig cfg;
  cfg.dataset.kind = "blobs";
  cfg.dataset.samples = 500;
  cfg.dataset.classes = 3;
  // Two encoder layers plus the output layer. The second encoder has real
  // fan-in, so per-step BPTT cost dominates the epoch and the training-cost
  // direction is measured on arithmetic rather than per-call overhead.
  cfg.arch = "FC48-FC48-FC3";
  cfg.input = "2";
  cfg.train.trainer = kind;
  cfg.train.epochs = 50;
  cfg.train.batch_size = 32;
  cfg.train.time_steps = 4;
  cfg.train.seed = seed;  // same config and seed for every trainer
  Experiment exp(cfg);
  RunArtifacts art = exp.run(nullptr);
  return {art.final_accuracy, art.sec_per_epoch};
}

void criterion_8_convergence() {
  const double t0 = now_seconds();
  const uint64_t seed = 42;  // pinned reference run
  ConvergenceRun stsu = blobs_run(TrainerKind::kS2ASTSU, seed);
  ConvergenceRun resu = blobs_run(TrainerKind::kS2AReSU, seed);
  ConvergenceRun stbp = blobs_run(TrainerKind::kStbp, seed);
  const double secs = now_seconds() - t0;
  const double s2a_epoch = std::min(stsu.sec_per_epoch, resu.sec_per_epoch);
  const bool pass = stsu.accuracy >= 0.95 && resu.accuracy >= 0.95 &&
                    stbp.accuracy >= 0.90 && s2a_epoch <= stbp.sec_per_epoch &&
                    secs < 240.0;
  std::ostringstream d;
  d << "held-out acc: stsu " << stsu.accuracy << ", resu " << resu.accuracy
    << ", stbp " << stbp.accuracy << "; sec/epoch s2a "
    << std::min(stsu.sec_per_epoch, resu.sec_per_epoch) << " <= stbp "
    << stbp.sec_per_epoch << "; total " << secs << "s";
  report(8, "desk-scale convergence and training-cost direction", pass,
         d.str());
}

struct AblationRun {
  double accuracy;
  double noisy_mass;
};

AblationRun images_run(bool ata, uint64_t seed) {
  ExperimentConfig cfg;
  cfg.dataset.kind = "images";
  cfg.dataset.samples = 600;
  cfg.dataset.classes = 3;
  cfg.dataset.image_h = 10;
  cfg.dataset.image_w = 10;
  cfg.arch = "k3c6s1p0-M2-FC3";
  cfg.input = "1x10x10";
  cfg.train.trainer = TrainerKind::kS2ASTSU;
  cfg.train.epochs = 12;
  cfg.train.time_steps = 4;
  cfg.train.seed = seed;
  cfg.train.ata_enabled = ata;
  Experiment exp(cfg);
  RunArtifacts art = exp.run(nullptr);
  double noisy = 0.0;
  for (const LayerReport& l : art.metrics.layers) noisy += l.noisy_per_image;
  return {art.final_accuracy, noisy};
}

void criterion_9_ablation() {
  const uint64_t seed = 42;  // pinned
  AblationRun with = images_run(true, seed);
  AblationRun without = images_run(false, seed);
  const bool pass = with.noisy_mass <= without.noisy_mass &&
                    with.accuracy >= without.accuracy - 0.01;
  std::ostringstream d;
  d << "noisy spikes/image: with ATA " << with.noisy_mass << " <= without "
    << without.noisy_mass << "; accuracy with " << with.accuracy
    << " vs without " << without.accuracy << " (slack 1 point)";
  report(9, "ATA ablation direction", pass, d.str());
}

void criterion_10_energy() {
  bool pass = true;
  std::ostringstream d;
  // Hand-computed op counts for the reference architecture on 1x12x12.
  NetworkSpec ref = spec_of("k3c16s1p0-M2-k3c32s1p0-M2-FC3", {1, 12, 12},
                            MappingKind::kSTSU, 4);
  const std::vector<double> ops = count_ann_ops(ref);
  const std::vector<double> want = {3 * 3 * 1 * 10 * 10 * 16.0,
                                    3 * 3 * 16 * 3 * 3 * 32.0, 32 * 3.0};
  pass = pass && ops.size() == want.size();
  for (size_t i = 0; i < want.size() && pass; ++i) {
    pass = ops[i] == want[i];
  }
  d << "op counts {14400, 41472, 96}: " << (pass ? "exact" : "MISMATCH");

  // Train briefly, emit the CSV, recompute the ratio from the emitted rows.
  ExperimentConfig cfg;
  cfg.dataset.kind = "images";
  cfg.dataset.samples = 120;
  cfg.dataset.classes = 3;
  cfg.dataset.image_h = 12;
  cfg.dataset.image_w = 12;
  cfg.arch = "k3c16s1p0-M2-k3c32s1p0-M2-FC3";
  cfg.input = "1x12x12";
  cfg.train.epochs = 2;
  cfg.train.time_steps = 4;
  cfg.train.seed = 10;
  Experiment exp(cfg);
  RunArtifacts art = exp.run(nullptr);
  const std::string csv = art.metrics.to_csv();
  // Spreadsheet-style recomputation from the CSV text.
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> a_ops, s_ops;
  while (std::getline(lines, line) && !line.empty()) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> row;
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    a_ops.push_back(std::stod(row[5]));
    s_ops.push_back(std::stod(row[6]));
  }
  double e_mac = 0, e_add = 0, ratio = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string key, value;
    std::getline(cells, key, ',');
    std::getline(cells, value, ',');
    if (key == "e_mac") e_mac = std::stod(value);
    if (key == "e_add") e_add = std::stod(value);
    if (key == "energy_ratio") ratio = std::stod(value);
  }
  double a_total = 0;
  for (double a : a_ops) a_total += a;
  double hidden = 0;
  for (size_t i = 1; i + 1 < s_ops.size(); ++i) hidden += s_ops[i];
  const double recomputed =
      e_mac * a_total /
      (e_mac * (s_ops.front() + s_ops.back()) + e_add * hidden);
  const bool csv_ok = std::fabs(recomputed - ratio) <= 1e-9 * ratio;
  pass = pass && csv_ok;
  d << "; CSV recomputation gap " << std::scientific
    << std::fabs(recomputed - ratio) << " (<= 1e-9 rel)";

  // All-silent hidden layers: closed form.
  {
    std::mt19937 rng(11);
    NetworkSpec spec = spec_of("k3c4s1p0-M2-FC3", {1, 10, 10},
                               MappingKind::kSTSU, 4);
    Network net = Network::build(spec, rng, VthInit{false, 1e9f}, 0.1f, 1e-5f);
    Dataset imgs = synth_images(40, 3, 12, 10, 10);
    MetricsReport m =
        evaluate_model(net, TrainerKind::kS2ASTSU, 4, imgs, 20);
    const std::vector<double> a = count_ann_ops(spec);
    const double expect =
        m.model.e_mac * (a[0] + a[1]) / (m.model.e_mac * (0.0 + a[1]));
    const bool silent_ok =
        std::fabs(m.energy_ratio_value - expect) <= 1e-12 * expect;
    pass = pass && silent_ok;
    d << "; silent closed form " << (silent_ok ? "exact" : "MISMATCH");
  }
  report(10, "energy accounting", pass, d.str());
}

void criterion_11_determinism() {
  const fs::path dir = fs::temp_directory_path() / "acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ExperimentConfig cfg;
  cfg.dataset.kind = "blobs";
  cfg.dataset.samples = 200;
  cfg.dataset.classes = 3;
  cfg.arch = "FC8-FC3";
  cfg.input = "2";
  cfg.train.epochs = 6;
  cfg.train.seed = 77;

  auto run_and_save = [&](const std::string& name) {
    Experiment exp(cfg);
    exp.run(nullptr);
    const std::string path = (dir / name).string();
    checkpoint_save(exp.net(), cfg.to_text(), path);
    return path;
  };
  const std::string p1 = run_and_save("a.s2a");
  const std::string p2 = run_and_save("b.s2a");
  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)),
                       std::istreambuf_iterator<char>());
  };
  const bool bitwise = slurp(p1) == slurp(p2) && !slurp(p1).empty();

  // Save/load round-trip preserves predictions exactly.
  Checkpoint loaded = checkpoint_load(p1);
  Experiment exp(cfg);
  exp.run(nullptr);
  Dataset eval = exp.eval_set();
  std::vector<int64_t> idx;
  for (int64_t i = 0; i < eval.size(); ++i) idx.push_back(i);
  const Tensor batch = eval.gather(idx);
  const std::vector<int> before =
      argmax_rows(snn_pass(exp.net(), batch, cfg.train.time_steps, true).logits);
  const std::vector<int> after = argmax_rows(
      snn_pass(loaded.net, batch, cfg.train.time_steps, true).logits);
  const bool preds = before == after;
  fs::remove_all(dir);
  std::ostringstream d;
  d << "identical configs give " << (bitwise ? "bitwise-identical" : "DIFFERENT")
    << " checkpoints; reloaded predictions "
    << (preds ? "match exactly" : "DIFFER");
  report(11, "determinism and persistence", bitwise && preds, d.str());
}

}  // namespace

int main() {
  std::cout << "acceptance suite (kernels: " << kernels().name << ")\n";
  criterion_1_scope();
  criterion_2_stsu_equivalence();
  criterion_3_if_oracle();
  criterion_4_rate_identity();
  criterion_5_gradients();
  criterion_6_fold_consistency();
  criterion_7_ata();
  criterion_8_convergence();
  criterion_9_ablation();
  criterion_10_energy();
  criterion_11_determinism();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                : "FAILURES: " + std::to_string(g_failures))
            << "\n";
  return g_failures;
}
