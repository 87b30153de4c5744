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

#include <doctest.h>

#include <random>

#include "snn2ann/ata.hpp"
#include "snn2ann/mapping.hpp"
#include "test_util.hpp"

using namespace s2a;
using s2a::testing::random_tensor;

TEST_CASE("resu masks counts by relu positivity") {
  Tensor relu({3}, {0.5f, 0.0f, 1.2f});
  Tensor counts({3}, {3.0f, 2.0f, 1.0f});
  Tensor out = resu_forward(relu, counts);
  CHECK(out.data == std::vector<float>{3.0f, 0.0f, 1.0f});

  Tensor zero_counts({3});
  Tensor z = resu_forward(relu, zero_counts);
  for (float v : z.data) CHECK(v == 0.0f);

  Tensor all_pos({3}, {0.1f, 0.2f, 0.3f});
  CHECK(testing::exactly_eq(resu_forward(all_pos, counts), counts));

  CHECK_THROWS_AS(resu_forward(Tensor({2}), counts), Error);
  Tensor negative({3}, {-0.1f, 0.0f, 0.0f});
  CHECK_THROWS_AS(resu_forward(negative, counts), Error);
}

TEST_CASE("stsu forward equals the counts exactly") {
  std::mt19937 rng(1);
  Tensor relu = random_tensor({40}, rng, 0.0f, 2.0f);
  Tensor counts({40});
  std::uniform_int_distribution<int> c(0, 5);
  for (float& v : counts.data) v = float(c(rng));
  Tensor out = stsu_forward(relu, counts);
  CHECK(testing::exactly_eq(out, counts));
  // output - counts is exactly zero everywhere: the offset cancels.
  for (size_t i = 0; i < out.data.size(); ++i) {
    CHECK(out[i] - counts[i] == 0.0f);
  }
  CHECK_THROWS_AS(stsu_forward(Tensor({2}), counts), Error);
}

TEST_CASE("both backward maps are the identity") {
  std::mt19937 rng(2);
  Tensor g = random_tensor({17}, rng);
  CHECK(testing::exactly_eq(resu_backward(g), g));
  CHECK(testing::exactly_eq(stsu_backward(g), g));
  Tensor zero({17});
  CHECK(testing::exactly_eq(resu_backward(zero), zero));
  // For identical upstream gradients the two units agree.
  CHECK(testing::exactly_eq(resu_backward(g), stsu_backward(g)));
}

TEST_CASE("mapping unit guards backward-before-forward") {
  MappingUnit unit(MappingKind::kReSU);
  Tensor g({3});
  CHECK_THROWS_AS(unit.backward(g), Error);
  Tensor relu({3}, {1.0f, 0.0f, 2.0f});
  Tensor counts({3}, {1.0f, 1.0f, 0.0f});
  Tensor out = unit.forward(relu, counts);
  CHECK(out.data == std::vector<float>{1.0f, 0.0f, 0.0f});
  CHECK(testing::exactly_eq(unit.backward(g), g));
}

TEST_CASE("mapping outputs stay integral") {
  std::mt19937 rng(3);
  Tensor relu = random_tensor({64}, rng, 0.0f, 1.0f);
  Tensor counts({64});
  std::uniform_int_distribution<int> c(0, 8);
  for (float& v : counts.data) v = float(c(rng));
  CHECK(resu_forward(relu, counts).is_integral());
  CHECK(stsu_forward(relu, counts).is_integral());
}

TEST_CASE("noisy spike mass: hand case and edge cases") {
  {
    Tensor counts({3}, {3.0f, 0.0f, 2.0f});
    Tensor relu({3}, {0.0f, 0.0f, 1.5f});
    NoiseStats s = noisy_spike_mass(counts, relu);
    CHECK(s.omega_size == 1);
    CHECK(s.mean_noise == doctest::Approx(3.0f));
  }
  {
    Tensor counts({3}, {1.0f, 2.0f, 3.0f});
    Tensor relu({3}, {0.5f, 0.5f, 0.5f});
    NoiseStats s = noisy_spike_mass(counts, relu);
    CHECK(s.omega_size == 0);
    CHECK(s.mean_noise == 0.0f);
  }
  {
    Tensor counts({3});
    Tensor relu({3});
    NoiseStats s = noisy_spike_mass(counts, relu);
    CHECK(s.omega_size == 0);
    CHECK(s.mean_noise == 0.0f);
  }
  CHECK_THROWS_AS(noisy_spike_mass(Tensor({2}), Tensor({3})), Error);
}

TEST_CASE("ata update: hand value and boundary behavior") {
  AtaConfig cfg;
  cfg.tau = 0.1f;
  cfg.alpha = 0.1f;
  cfg.epsilon = 0.01f;
  CHECK(ata_update(0.5f, 0.3f, cfg) == doctest::Approx(0.545f));
  CHECK(ata_update(0.5f, 0.0f, cfg) == 0.5f);
  // Sign(0) = 0: no growth exactly at the tolerance.
  CHECK(ata_update(0.5f, cfg.epsilon, cfg) == 0.5f);
  CHECK(ata_update(0.5f, 0.005f, cfg) == 0.5f);
}

TEST_CASE("ata multiplier is exactly 1 or 1+tau*(1-alpha)") {
  AtaConfig cfg;
  std::mt19937 rng(4);
  std::uniform_real_distribution<float> noise(0.0f, 3.0f);
  std::uniform_real_distribution<float> vdist(0.01f, 2.0f);
  const float grow = 1.0f + cfg.tau * (1.0f - cfg.alpha);
  for (int i = 0; i < 1000; ++i) {
    const float vth = vdist(rng);
    const float next = ata_update(vth, noise(rng), cfg);
    const bool unchanged = next == vth;
    const bool grown = next == vth * grow;
    CHECK((unchanged || grown));
    CHECK(next >= vth);
  }
}

TEST_CASE("ata state stays positive and non-decreasing over a trajectory") {
  AtaState state(0.25f, AtaConfig{});
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> noise(0.0f, 0.5f);
  float prev = state.vth;
  for (int i = 0; i < 500; ++i) {
    state.update(noise(rng));
    CHECK(state.vth >= prev);
    CHECK(state.vth > 0.0f);
    prev = state.vth;
  }
  CHECK_THROWS_AS(AtaState(0.0f, AtaConfig{}), Error);
}
