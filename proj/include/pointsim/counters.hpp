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

#include <cstdint>

namespace pointsim {

// DRAM traffic split by what the bytes carried.
struct DramBytes {
  std::uint64_t input_features = 0;
  std::uint64_t weights = 0;
  std::uint64_t outputs = 0;
  std::uint64_t intermediates = 0;

  std::uint64_t total() const { return input_features + weights + outputs + intermediates; }

  DramBytes& operator+=(const DramBytes& o) {
    input_features += o.input_features;
    weights += o.weights;
    outputs += o.outputs;
    intermediates += o.intermediates;
    return *this;
  }
};

struct SramTraffic {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;

  SramTraffic& operator+=(const SramTraffic& o) {
    reads += o.reads;
    writes += o.writes;
    return *this;
  }
};

// Everything the reports are built from. Totals over layers are plain
// field-wise sums.
struct PerfCounters {
  std::uint64_t mpu_cycles = 0;
  std::uint64_t mxu_cycles = 0;
  std::uint64_t dram_cycles = 0;
  std::uint64_t macs = 0;

  SramTraffic input_buf;
  SramTraffic weight_buf;
  SramTraffic output_buf;
  SramTraffic sorter_buf;

  DramBytes dram;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;

  PerfCounters& operator+=(const PerfCounters& o) {
    mpu_cycles += o.mpu_cycles;
    mxu_cycles += o.mxu_cycles;
    dram_cycles += o.dram_cycles;
    macs += o.macs;
    input_buf += o.input_buf;
    weight_buf += o.weight_buf;
    output_buf += o.output_buf;
    sorter_buf += o.sorter_buf;
    dram += o.dram;
    cache_hits += o.cache_hits;
    cache_misses += o.cache_misses;
    return *this;
  }
};

}  // namespace pointsim
