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

#pragma once

// Data-parallel inner loops of the feature pipeline, with scalar reference
// implementations and SIMD variants selected at runtime. Every variant of
// a kernel performs the identical arithmetic per output element in the
// identical order (no FMA, no reassociation), so results are bit-equal
// across variants; the unit tests assert this.

#include <cstddef>
#include <cstdint>
#include <string>

namespace pointsim::kern {

// y[i] += a * x[i]. The accumulation primitive behind every MatMul path.
using AxpyFn = void (*)(std::size_t n, float a, const float* x, float* y);

// y[i] = max(y[i], x[i]). Max-pooling aggregation.
using MaxFn = void (*)(std::size_t n, const float* x, float* y);

// dist[i] = min(dist[i], (xs[i]-px)^2 + (ys[i]-py)^2 + (zs[i]-pz)^2).
// Exact integer arithmetic; the running-minimum update of farthest point
// sampling. 2-D clouds pass zs == nullptr.
using SqDistMinFn = void (*)(std::size_t n, const std::int32_t* xs, const std::int32_t* ys,
                             const std::int32_t* zs, std::int32_t px, std::int32_t py,
                             std::int32_t pz, std::uint64_t* dist);

// dist[i] = squared distance to (px,py,pz); plain fill for kNN queries.
using SqDistFillFn = void (*)(std::size_t n, const std::int32_t* xs, const std::int32_t* ys,
                              const std::int32_t* zs, std::int32_t px, std::int32_t py,
                              std::int32_t pz, std::uint64_t* dist);

struct KernelTable {
  AxpyFn axpy;
  MaxFn max_inplace;
  SqDistMinFn sqdist_min;
  SqDistFillFn sqdist_fill;
  const char* name;  // "scalar", "avx2", ...
};

// Scalar reference kernels (always available; the oracle for every variant).
extern const KernelTable kScalarKernels;

#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Kernels;
#endif

// Active table: picked once at first use from CPU capabilities, overridable
// with POINTSIM_KERNELS=scalar|avx2.
const KernelTable& active();

// Forces a specific variant (tests); returns false if unavailable.
bool select(const std::string& name);

}  // namespace pointsim::kern
