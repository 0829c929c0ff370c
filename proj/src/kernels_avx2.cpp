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

// AVX2 kernel variants. This translation unit is built with -mavx2; the
// dispatcher only routes here when the CPU reports AVX2 support. Float
// paths use separate mul/add (no FMA) so results match the scalar
// reference bit for bit.

#include "pointsim/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace pointsim::kern {

namespace {

void axpy_avx2(std::size_t n, float a, const float* x, float* y) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vx = _mm256_loadu_ps(x + i);
    const __m256 vy = _mm256_loadu_ps(y + i);
    _mm256_storeu_ps(y + i, _mm256_add_ps(vy, _mm256_mul_ps(va, vx)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void max_avx2(std::size_t n, const float* x, float* y) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vx = _mm256_loadu_ps(x + i);
    const __m256 vy = _mm256_loadu_ps(y + i);
    _mm256_storeu_ps(y + i, _mm256_max_ps(vy, vx));
  }
  for (; i < n; ++i) y[i] = y[i] < x[i] ? x[i] : y[i];
}

// Widens 4 int32 lanes to int64, squares the difference to the pivot.
inline __m256i sqdiff64(const std::int32_t* p, std::size_t i, std::int32_t pivot) {
  const __m128i v32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + i));
  const __m128i d32 = _mm_sub_epi32(v32, _mm_set1_epi32(pivot));
  const __m256i d64 = _mm256_cvtepi32_epi64(d32);
  return _mm256_mul_epi32(d64, d64);  // low 32 bits of each lane, signed 32x32->64
}

// Unsigned 64-bit min via the sign-flip trick (AVX2 only has signed compare).
inline __m256i min_epu64(__m256i a, __m256i b) {
  const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ull));
  const __m256i gt = _mm256_cmpgt_epi64(_mm256_xor_si256(a, bias), _mm256_xor_si256(b, bias));
  return _mm256_blendv_epi8(a, b, gt);
}

inline __m256i sqdist4(std::size_t i, const std::int32_t* xs, const std::int32_t* ys,
                       const std::int32_t* zs, std::int32_t px, std::int32_t py,
                       std::int32_t pz) {
  __m256i d = _mm256_add_epi64(sqdiff64(xs, i, px), sqdiff64(ys, i, py));
  if (zs) d = _mm256_add_epi64(d, sqdiff64(zs, i, pz));
  return d;
}

void sqdist_min_avx2(std::size_t n, const std::int32_t* xs, const std::int32_t* ys,
                     const std::int32_t* zs, std::int32_t px, std::int32_t py, std::int32_t pz,
                     std::uint64_t* dist) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i d = sqdist4(i, xs, ys, zs, px, py, pz);
    const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dist + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dist + i), min_epu64(cur, d));
  }
  kScalarKernels.sqdist_min(n - i, xs + i, ys + i, zs ? zs + i : nullptr, px, py, pz, dist + i);
}

void sqdist_fill_avx2(std::size_t n, const std::int32_t* xs, const std::int32_t* ys,
                      const std::int32_t* zs, std::int32_t px, std::int32_t py, std::int32_t pz,
                      std::uint64_t* dist) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i d = sqdist4(i, xs, ys, zs, px, py, pz);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dist + i), d);
  }
  kScalarKernels.sqdist_fill(n - i, xs + i, ys + i, zs ? zs + i : nullptr, px, py, pz, dist + i);
}

}  // namespace

const KernelTable kAvx2Kernels = {axpy_avx2, max_avx2, sqdist_min_avx2, sqdist_fill_avx2, "avx2"};

}  // namespace pointsim::kern

#endif  // x86_64
