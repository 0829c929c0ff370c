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

#include "pointsim/timing.hpp"

#include <algorithm>
#include <stdexcept>

namespace pointsim {

std::uint64_t merge_cycles(std::uint64_t a, std::uint64_t b, std::uint64_t width, unsigned depth) {
  return ceil_div(a + b, width / 2) + depth;
}

namespace {

// Walks the merge tree the sorter actually executes: bitonic passes over
// width-sized chunks, then pairwise streaming merges, with optional run
// truncation (top-k). Counts one cycle per bitonic pass, merge steps per
// streaming merge plus a pipeline fill each, and one initial fill.
std::uint64_t tree_cycles(std::uint64_t n, std::uint64_t truncate, std::uint64_t width,
                          unsigned depth) {
  if (n == 0) return 0;
  std::uint64_t cycles = ceil_div(n, width);  // bitonic passes

  std::vector<std::uint64_t> runs;
  runs.reserve(ceil_div(n, width));
  for (std::uint64_t base = 0; base < n; base += width) {
    std::uint64_t len = std::min(width, n - base);
    if (truncate) len = std::min(len, truncate);
    runs.push_back(len);
  }
  while (runs.size() > 1) {
    std::vector<std::uint64_t> next;
    next.reserve((runs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < runs.size(); i += 2) {
      cycles += merge_cycles(runs[i], runs[i + 1], width, depth);
      std::uint64_t merged = runs[i] + runs[i + 1];
      if (truncate) merged = std::min(merged, truncate);
      next.push_back(merged);
    }
    if (runs.size() % 2) next.push_back(runs.back());
    runs = std::move(next);
  }
  return cycles + depth;
}

}  // namespace

std::uint64_t sort_cycles(std::uint64_t n, std::uint64_t width, unsigned depth) {
  return tree_cycles(n, 0, width, depth);
}

std::uint64_t topk_cycles(std::uint64_t n, std::uint64_t k, std::uint64_t width, unsigned depth) {
  return tree_cycles(n, std::max<std::uint64_t>(k, 1), width, depth);
}

std::uint64_t fps_cycles(std::uint64_t n, std::uint64_t m, std::uint64_t width, unsigned depth) {
  return m * (ceil_div(n, width) + depth);
}

std::uint64_t kernel_map_cycles(std::uint64_t n_in, std::uint64_t n_out, std::uint64_t offsets,
                                std::uint64_t width, unsigned depth) {
  return offsets * merge_cycles(n_in, n_out, width, depth);
}

std::uint64_t mpu_cycles(MpuOp op, const MpuSizes& s, std::uint64_t width, unsigned depth) {
  switch (op) {
    case MpuOp::kMerge: return merge_cycles(s.a, s.b, width, depth);
    case MpuOp::kSort: return sort_cycles(s.n, width, depth);
    case MpuOp::kTopK: return topk_cycles(s.n, s.k, width, depth);
    case MpuOp::kFps: return fps_cycles(s.n, s.m, width, depth);
    case MpuOp::kKernelMap: return kernel_map_cycles(s.n_in, s.n_out, s.offsets, width, depth);
  }
  return 0;
}

std::uint64_t mxu_cycles(std::uint64_t m, std::uint64_t k_dim, std::uint64_t n_dim,
                         std::uint64_t rows, std::uint64_t cols) {
  if (m == 0 || k_dim == 0 || n_dim == 0) return 0;
  return ceil_div(k_dim, rows) * ceil_div(n_dim, cols) * (m + rows + cols - 1);
}

std::uint64_t layer_latency(const PerfCounters& pc, bool overlap) {
  if (overlap) return std::max(pc.mxu_cycles, pc.dram_cycles) + pc.mpu_cycles;
  return pc.mxu_cycles + pc.dram_cycles + pc.mpu_cycles;
}

EnergyReport energy_report(const PerfCounters& pc, const EnergyCoefficients& c) {
  if (c.mac < 0 || c.sram_read < 0 || c.sram_write < 0 || c.dram_byte < 0)
    throw std::invalid_argument("energy_report: negative coefficient");

  const auto sram = [&](const SramTraffic& t) {
    return static_cast<double>(t.reads) * c.sram_read + static_cast<double>(t.writes) * c.sram_write;
  };

  EnergyReport rep;
  rep.items = {
      {"compute", static_cast<double>(pc.macs) * c.mac, 0.0},
      {"sram_input", sram(pc.input_buf), 0.0},
      {"sram_weight", sram(pc.weight_buf), 0.0},
      {"sram_output", sram(pc.output_buf), 0.0},
      {"sram_sorter", sram(pc.sorter_buf), 0.0},
      {"dram", static_cast<double>(pc.dram.total()) * c.dram_byte, 0.0},
  };
  for (const auto& it : rep.items) rep.total += it.energy;
  if (rep.total > 0.0)
    for (auto& it : rep.items) it.fraction = it.energy / rep.total;
  return rep;
}

}  // namespace pointsim
