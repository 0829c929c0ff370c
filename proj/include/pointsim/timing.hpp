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

// Closed-form cycle models and coefficient-based energy reporting.
//
// Pipeline model: the ranking pipeline has P stages and its merger eats
// N/2 elements per cycle, so
//   merge(a, b)      = ceil((a+b)/(N/2)) + P
//   sort(n)          = ceil(n/N) bitonic passes + sum over tree merges + P
//   topk(n, k)       = sort with every intermediate run clipped to k
//   fps(n, m)        = m * (ceil(n/N) + P)       (one sweep per selection)
//   kernel_map       = sum over offsets of merge(n_in, n_out)
// The systolic array is R x C with row/column parallelism over in/out
// channels: mxu(M, K, N) = ceil(K/R) * ceil(N/C) * (M + R + C - 1).

#include <cstdint>
#include <vector>

#include "pointsim/common.hpp"
#include "pointsim/counters.hpp"

namespace pointsim {

enum class MpuOp { kMerge, kSort, kTopK, kFps, kKernelMap };

struct MpuSizes {
  std::uint64_t a = 0;        // merge: first stream length
  std::uint64_t b = 0;        // merge: second stream length
  std::uint64_t n = 0;        // sort/topk/fps: element count
  std::uint64_t k = 0;        // topk: k
  std::uint64_t m = 0;        // fps: selections
  std::uint64_t n_in = 0;     // kernel_map: input cloud size
  std::uint64_t n_out = 0;    // kernel_map: output cloud size
  std::uint64_t offsets = 0;  // kernel_map: kernel volume
};

std::uint64_t merge_cycles(std::uint64_t a, std::uint64_t b, std::uint64_t width, unsigned depth = 6);
std::uint64_t sort_cycles(std::uint64_t n, std::uint64_t width, unsigned depth = 6);
std::uint64_t topk_cycles(std::uint64_t n, std::uint64_t k, std::uint64_t width, unsigned depth = 6);
std::uint64_t fps_cycles(std::uint64_t n, std::uint64_t m, std::uint64_t width, unsigned depth = 6);
std::uint64_t kernel_map_cycles(std::uint64_t n_in, std::uint64_t n_out, std::uint64_t offsets,
                                std::uint64_t width, unsigned depth = 6);

std::uint64_t mpu_cycles(MpuOp op, const MpuSizes& sizes, std::uint64_t width, unsigned depth = 6);

// Systolic timing for an (M x K) * (K x N) product on an R x C array.
std::uint64_t mxu_cycles(std::uint64_t m, std::uint64_t k_dim, std::uint64_t n_dim,
                         std::uint64_t rows, std::uint64_t cols);

// With overlap, data movement hides behind the matrix math:
//   max(MXU, DRAM) + MPU; without it, everything serializes.
std::uint64_t layer_latency(const PerfCounters& pc, bool overlap);

// All coefficients are configured, not derived; the shipped defaults are
// illustrative placeholders for relative comparisons only.
struct EnergyCoefficients {
  double mac = 1.0;          // per MAC
  double sram_read = 0.5;    // per buffer entry read
  double sram_write = 0.6;   // per buffer entry write
  double dram_byte = 20.0;   // per byte moved
};

struct EnergyReport {
  struct Item {
    const char* category;
    double energy;
    double fraction;
  };
  std::vector<Item> items;
  double total = 0.0;
};

// Category energies are counter * coefficient; fractions sum to 1 when
// the total is nonzero. Negative coefficients are rejected.
EnergyReport energy_report(const PerfCounters& pc, const EnergyCoefficients& coeffs);

}  // namespace pointsim
