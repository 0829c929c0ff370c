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

#include <algorithm>

#include "pointsim/kernels.hpp"

// Reference kernels. Compiled with -ffp-contract=off so the float paths
// stay un-fused and bit-comparable with the SIMD variants.

namespace pointsim::kern {

namespace {

void axpy_scalar(std::size_t n, float a, const float* x, float* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void max_scalar(std::size_t n, const float* x, float* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(y[i], x[i]);
}

inline std::uint64_t sq(std::int32_t a, std::int32_t b) {
  const std::int64_t d = static_cast<std::int64_t>(a) - b;
  return static_cast<std::uint64_t>(d * d);
}

void sqdist_min_scalar(std::size_t n, const std::int32_t* xs, const std::int32_t* ys,
                       const std::int32_t* zs, std::int32_t px, std::int32_t py, std::int32_t pz,
                       std::uint64_t* dist) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t d = sq(xs[i], px) + sq(ys[i], py);
    if (zs) d += sq(zs[i], pz);
    dist[i] = std::min(dist[i], d);
  }
}

void sqdist_fill_scalar(std::size_t n, const std::int32_t* xs, const std::int32_t* ys,
                        const std::int32_t* zs, std::int32_t px, std::int32_t py, std::int32_t pz,
                        std::uint64_t* dist) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t d = sq(xs[i], px) + sq(ys[i], py);
    if (zs) d += sq(zs[i], pz);
    dist[i] = d;
  }
}

}  // namespace

const KernelTable kScalarKernels = {axpy_scalar, max_scalar, sqdist_min_scalar,
                                    sqdist_fill_scalar, "scalar"};

}  // namespace pointsim::kern
