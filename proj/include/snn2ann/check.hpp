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

#ifndef SNN2ANN_CHECK_HPP_
#define SNN2ANN_CHECK_HPP_

#include <sstream>
#include <stdexcept>
#include <string>

namespace s2a {

// Runtime contract violation. Thrown by S2A_CHECK on bad shapes, bad
// arguments, non-finite values and corrupt files.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace s2a

#define S2A_CHECK(cond, msg)                              \
  do {                                                    \
    if (!(cond)) {                                        \
      std::ostringstream oss_;                            \
      oss_ << "check failed: " << msg << " (" << __FILE__ \
           << ":" << __LINE__ << ")";                     \
      throw ::s2a::Error(oss_.str());                     \
    }                                                     \
  } while (0)

#endif  // SNN2ANN_CHECK_HPP_
