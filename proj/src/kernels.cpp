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

// Runtime kernel backend selection.

#include <cstdlib>
#include <string>

#include "snn2ann/check.hpp"
#include "snn2ann/kernels.hpp"

namespace s2a {

extern const KernelTable kScalarKernels;
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonKernels;
#endif

namespace {

bool backend_available(KernelBackend b) {
  switch (b) {
    case KernelBackend::kScalar:
      return true;
    case KernelBackend::kAvx2:
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case KernelBackend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

KernelBackend default_backend() {
  const char* env = std::getenv("SNN2ANN_KERNELS");
  if (env != nullptr) {
    const std::string s(env);
    KernelBackend want = KernelBackend::kScalar;
    if (s == "scalar") {
      want = KernelBackend::kScalar;
    } else if (s == "avx2") {
      want = KernelBackend::kAvx2;
    } else if (s == "neon") {
      want = KernelBackend::kNeon;
    } else {
      S2A_CHECK(false, "SNN2ANN_KERNELS must be scalar, avx2 or neon, got '"
                           << s << "'");
    }
    S2A_CHECK(backend_available(want),
              "kernel backend '" << s << "' not available on this CPU");
    return want;
  }
  if (backend_available(KernelBackend::kAvx2)) return KernelBackend::kAvx2;
  if (backend_available(KernelBackend::kNeon)) return KernelBackend::kNeon;
  return KernelBackend::kScalar;
}

const KernelTable*& active_table() {
  static const KernelTable* table = &kernel_table(default_backend());
  return table;
}

}  // namespace

const char* backend_name(KernelBackend b) {
  switch (b) {
    case KernelBackend::kScalar:
      return "scalar";
    case KernelBackend::kAvx2:
      return "avx2";
    case KernelBackend::kNeon:
      return "neon";
  }
  return "?";
}

std::vector<KernelBackend> available_backends() {
  std::vector<KernelBackend> out;
  for (KernelBackend b : {KernelBackend::kScalar, KernelBackend::kAvx2,
                          KernelBackend::kNeon}) {
    if (backend_available(b)) out.push_back(b);
  }
  return out;
}

const KernelTable& kernel_table(KernelBackend b) {
  S2A_CHECK(backend_available(b),
            "kernel backend '" << backend_name(b) << "' not available");
  switch (b) {
    case KernelBackend::kScalar:
      return kScalarKernels;
    case KernelBackend::kAvx2:
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
      return kAvx2Kernels;
#else
      break;
#endif
    case KernelBackend::kNeon:
#if defined(__aarch64__)
      return kNeonKernels;
#else
      break;
#endif
  }
  return kScalarKernels;
}

const KernelTable& kernels() { return *active_table(); }

void set_kernel_backend(KernelBackend b) {
  active_table() = &kernel_table(b);
}

}  // namespace s2a
