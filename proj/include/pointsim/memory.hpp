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

// Memory management model: tile metadata (MIR) with three container
// disciplines, the configurable-block direct-mapped input cache used by
// the fetch-on-demand flow, a parametric DRAM cost model, and the
// temporal layer-fusion scheduler/executor for FC chains.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pointsim/common.hpp"
#include "pointsim/counters.hpp"
#include "pointsim/sparse_tensor.hpp"

namespace pointsim {

// Parametric DRAM cost model: traffic is charged per burst.
struct DramModel {
  std::uint32_t burst_bytes = 32;
  std::uint32_t burst_latency = 4;   // cycles per burst
  double energy_per_byte = 20.0;     // illustrative default, see EnergyCoefficients

  std::uint64_t cycles_for(std::uint64_t bytes) const {
    return ceil_div(bytes, burst_bytes) * burst_latency;
  }
};

// Metadata for one on-chip memory tile.
struct MemoryTileInfo {
  std::uint32_t tag_point = 0;    // first point index covered
  std::uint32_t tag_channel = 0;  // first channel index covered
  std::uint32_t start_address = 0;
  std::uint32_t capacity = 0;     // buffer entries
  std::int32_t layer_id = -1;
  std::uint32_t remaining = 0;    // unconsumed entries
  bool valid = false;
};

enum class MirDiscipline { kTagArray, kFifo, kStack };

// Bounded container of MIRs. As a tag array it is indexed directly (one
// way); as a stack only the top entry is active; as a FIFO a tile is
// evicted only when the prefetching tile conflicts with it.
class MirContainer {
 public:
  MirContainer(MirDiscipline d, std::size_t max_entries)
      : discipline_(d), max_entries_(max_entries) {
    if (d == MirDiscipline::kTagArray) slots_.resize(max_entries);
  }

  MirDiscipline discipline() const { return discipline_; }
  std::size_t max_entries() const { return max_entries_; }

  // --- tag array ---
  MemoryTileInfo& slot(std::size_t index) { return slots_.at(index); }
  const MemoryTileInfo& slot(std::size_t index) const { return slots_.at(index); }

  // --- stack ---
  void push(const MemoryTileInfo& mir);
  MemoryTileInfo pop();
  MemoryTileInfo& top();
  bool empty() const { return slots_.empty(); }
  std::size_t size() const { return slots_.size(); }

  // Sum of live tile capacities and its high-water mark, for the stack
  // safety invariant.
  std::uint64_t live_capacity() const { return live_capacity_; }
  std::uint64_t peak_capacity() const { return peak_capacity_; }

  // --- fifo ---
  // Allocates space for `mir`, evicting from the front only while the new
  // tile conflicts (insufficient free capacity). Returns evicted tiles.
  std::vector<MemoryTileInfo> fifo_allocate(const MemoryTileInfo& mir,
                                            std::uint64_t capacity_limit);

 private:
  MirDiscipline discipline_;
  std::size_t max_entries_;
  std::vector<MemoryTileInfo> slots_;
  std::uint64_t live_capacity_ = 0;
  std::uint64_t peak_capacity_ = 0;
};

// Geometry of the on-demand input-feature cache. A block groups B
// consecutive feature vectors under one tag; channel_tile is the channel
// width covered per tag (0 = the whole feature row). total_entries == 0
// disables caching entirely (every fetch goes to DRAM once).
struct CacheConfig {
  std::uint32_t total_entries = 0;  // feature vectors held
  std::uint32_t block = 1;          // B: vectors per block
  std::uint32_t channel_tile = 0;   // channels per tag; 0 = full row
};

// Direct-mapped cache over the MIR container as shared tag array.
// Set index = (block index XOR channel-tile index) mod #sets.
class FeatureCache {
 public:
  FeatureCache(const CacheConfig& cfg, std::uint32_t channels, const DramModel& dram);

  // Looks up the block containing (point, channel). On a miss the mapped
  // slot is evicted and DRAM is charged for the whole block. Counters are
  // updated either way. Returns true on hit.
  bool access(std::uint32_t point, std::uint32_t channel, PerfCounters& pc);

  std::uint32_t sets() const { return sets_; }
  std::uint32_t block() const { return cfg_.block; }
  std::uint32_t channel_tile() const { return channel_tile_; }
  std::uint64_t block_bytes() const;

 private:
  CacheConfig cfg_;
  std::uint32_t channel_tile_;
  std::uint32_t sets_;
  DramModel dram_;
  MirContainer tags_;
};

// ---------------------------------------------------------------------------
// Temporal layer fusion
// ---------------------------------------------------------------------------

struct FcDims {
  std::uint32_t in_ch = 0;
  std::uint32_t out_ch = 0;
};

// Fused group boundaries plus the point-dimension tile chosen per group.
struct FusionPlan {
  struct Group {
    std::uint32_t first_layer = 0;
    std::uint32_t num_layers = 0;
    std::uint32_t tile = 0;  // points per outer tile
  };
  std::vector<Group> groups;
};

// Greedy longest-prefix fusion with point-dimension tiling only: try to
// fuse all remaining layers; if no tile size fits the buffer, drop the
// last layer and retry. Within a feasible group the largest power-of-two
// tile is chosen. Capacity is in buffer entries (floats) and includes a
// reservation of one input tile for prefetch double-buffering.
FusionPlan fusion_schedule(const std::vector<FcDims>& chain, std::uint64_t buffer_capacity);

// Worst-case live buffer entries for one outer tile of `tile` points
// through `dims` (used by the scheduler; exposed for tests).
std::uint64_t fused_peak_entries(const std::vector<FcDims>& dims, std::uint32_t tile);

// Tile lifecycle events, recorded for inspection. One entry per push /
// shrink / release / compute / outer-tile advance.
struct FusionEvent {
  enum class Kind { kPush, kShrink, kRelease, kCompute, kAdvanceTile } kind;
  std::int32_t layer_id;     // whose data the tile holds (input of layer_id)
  std::uint32_t points;      // tile points (push/compute) or remaining (shrink)
};

struct FusedResult {
  FeatureMatrix features;
  PerfCounters counters;
  std::vector<FusionEvent> trace;
  std::uint64_t peak_entries = 0;
};

class WeightStack;  // execution.hpp

// Executes a chain of FC layers under `plan` with a stack-disciplined
// MIR container. Output is bit-identical to running the layers
// sequentially; intermediate features inside a fused group never touch
// DRAM. `final_outputs` controls whether the last layer's result is
// charged as outputs or as intermediates (when more layers follow).
FusedResult fused_execute(const FusionPlan& plan, const FeatureMatrix& input,
                          const std::vector<WeightStack>& weights, const DramModel& dram,
                          std::uint64_t buffer_capacity, bool final_outputs = true);

// Per-category DRAM byte totals; the categories sum to total().
struct DramTrafficReport {
  std::uint64_t input_features = 0;
  std::uint64_t weights = 0;
  std::uint64_t outputs = 0;
  std::uint64_t intermediates = 0;
  std::uint64_t total = 0;
};

DramTrafficReport dram_traffic_report(const PerfCounters& pc);

}  // namespace pointsim
