/*
 * Copyright 2026 The pointsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>

#include "pointsim/kernels.hpp"

namespace pointsim::kern {

namespace {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* pick(const std::string& name) {
  if (name == "scalar") return &kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2" && avx2_available()) return &kAvx2Kernels;
#endif
  return nullptr;
}

const KernelTable* default_table() {
  if (const char* env = std::getenv("POINTSIM_KERNELS")) {
    if (const KernelTable* t = pick(env)) return t;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return &kAvx2Kernels;
#endif
  return &kScalarKernels;
}

const KernelTable* g_active = nullptr;

}  // namespace

const KernelTable& active() {
  if (!g_active) g_active = default_table();
  return *g_active;
}

bool select(const std::string& name) {
  const KernelTable* t = pick(name);
  if (!t) return false;
  g_active = t;
  return true;
}

}  // namespace pointsim::kern
