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

#ifndef SNN2ANN_CHECKPOINT_HPP_
#define SNN2ANN_CHECKPOINT_HPP_

#include <string>

#include "snn2ann/network.hpp"

namespace s2a {

// Versioned container. Layout:
//   magic "S2AC" | u32 version | u32 header bytes | header text |
//   u32 tensor count | per tensor: u32 name bytes, name, u32 rank,
//   i64 dims..., f32 data (little endian).
// The header text carries the network description (arch, input dims,
// mapping, time steps) plus a caller-supplied config block, both as flat
// key=value lines. Parameters round-trip bitwise.

struct Checkpoint {
  Network net;
  std::string config_text;  // caller-supplied block stored alongside
};

void checkpoint_save(const Network& net, const std::string& config_text,
                     const std::string& path);
Checkpoint checkpoint_load(const std::string& path);

}  // namespace s2a

#endif  // SNN2ANN_CHECKPOINT_HPP_
