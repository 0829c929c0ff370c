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

#include "pointsim/memory.hpp"

#include <algorithm>

#include "pointsim/execution.hpp"

namespace pointsim {

// ---------------------------------------------------------------------------
// MirContainer
// ---------------------------------------------------------------------------

void MirContainer::push(const MemoryTileInfo& mir) {
  assert(discipline_ == MirDiscipline::kStack);
  if (slots_.size() >= max_entries_) throw InternalError("MIR container: stack overflow");
  slots_.push_back(mir);
  live_capacity_ += mir.capacity;
  peak_capacity_ = std::max(peak_capacity_, live_capacity_);
}

MemoryTileInfo MirContainer::pop() {
  assert(discipline_ == MirDiscipline::kStack);
  if (slots_.empty()) throw InternalError("MIR container: pop on empty stack");
  MemoryTileInfo mir = slots_.back();
  slots_.pop_back();
  live_capacity_ -= mir.capacity;
  return mir;
}

MemoryTileInfo& MirContainer::top() {
  assert(discipline_ == MirDiscipline::kStack);
  if (slots_.empty()) throw InternalError("MIR container: top on empty stack");
  return slots_.back();
}

std::vector<MemoryTileInfo> MirContainer::fifo_allocate(const MemoryTileInfo& mir,
                                                        std::uint64_t capacity_limit) {
  assert(discipline_ == MirDiscipline::kFifo);
  std::vector<MemoryTileInfo> evicted;
  // Evict from the front only while the prefetching tile conflicts.
  while (!slots_.empty() &&
         (live_capacity_ + mir.capacity > capacity_limit || slots_.size() >= max_entries_)) {
    live_capacity_ -= slots_.front().capacity;
    evicted.push_back(slots_.front());
    slots_.erase(slots_.begin());
  }
  if (mir.capacity > capacity_limit) throw ConfigError("MIR container: tile larger than buffer");
  slots_.push_back(mir);
  live_capacity_ += mir.capacity;
  peak_capacity_ = std::max(peak_capacity_, live_capacity_);
  return evicted;
}

// ---------------------------------------------------------------------------
// FeatureCache
// ---------------------------------------------------------------------------

FeatureCache::FeatureCache(const CacheConfig& cfg, std::uint32_t channels, const DramModel& dram)
    : cfg_(cfg),
      channel_tile_(cfg.channel_tile == 0 ? channels : cfg.channel_tile),
      sets_(0),
      dram_(dram),
      tags_(MirDiscipline::kTagArray, cfg.block ? cfg.total_entries / cfg.block : 0) {
  if (cfg.total_entries == 0) throw std::invalid_argument("FeatureCache: zero entries means no cache");
  if (cfg.block == 0 || cfg.total_entries % cfg.block != 0)
    throw std::invalid_argument("FeatureCache: total entries must be a positive multiple of block");
  sets_ = cfg.total_entries / cfg.block;
}

std::uint64_t FeatureCache::block_bytes() const {
  return static_cast<std::uint64_t>(cfg_.block) * channel_tile_ * sizeof(float);
}

bool FeatureCache::access(std::uint32_t point, std::uint32_t channel, PerfCounters& pc) {
  const std::uint32_t block_idx = point / cfg_.block;
  const std::uint32_t ct_idx = channel / channel_tile_;
  const std::uint32_t set = (block_idx ^ ct_idx) % sets_;
  const std::uint32_t tag_point = block_idx * cfg_.block;
  const std::uint32_t tag_channel = ct_idx * channel_tile_;

  MemoryTileInfo& mir = tags_.slot(set);
  if (mir.valid && mir.tag_point == tag_point && mir.tag_channel == tag_channel) {
    ++pc.cache_hits;
    pc.input_buf.reads += channel_tile_;
    return true;
  }
  // Miss: evict whatever occupied the slot and pull the whole block.
  ++pc.cache_misses;
  mir.valid = true;
  mir.tag_point = tag_point;
  mir.tag_channel = tag_channel;
  mir.capacity = cfg_.block * channel_tile_;
  mir.remaining = mir.capacity;
  mir.start_address = set * cfg_.block * channel_tile_;
  pc.dram.input_features += block_bytes();
  pc.dram_cycles += dram_.cycles_for(block_bytes());
  pc.input_buf.writes += static_cast<std::uint64_t>(cfg_.block) * channel_tile_;
  pc.input_buf.reads += channel_tile_;
  return false;
}

// ---------------------------------------------------------------------------
// Temporal layer fusion
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kF = sizeof(float);

// The lifecycle walker behind both the capacity estimate and the real
// executor. The first layer of a group consumes its tile wholesale;
// deeper layers work through their input in half-tile chunks, so a parent
// tile shrinks (or is released) before its child's tile is pushed above
// it on the stack.
//
// on_compute(layer, global_row, local_row, row_count): run one layer over
// a chunk; global_row indexes the whole point dimension, local_row the
// layer's current input tile. on_event records the tile lifecycle.
template <typename ComputeFn, typename EventFn>
std::uint64_t walk_fused_group(const std::vector<FcDims>& dims, std::uint32_t tile,
                               std::uint64_t total_points, ComputeFn&& on_compute,
                               EventFn&& on_event) {
  const std::size_t num_layers = dims.size();
  MirContainer stack(MirDiscipline::kStack, num_layers + 1);

  const std::uint32_t granularity = std::max<std::uint32_t>(1, tile / 2);

  struct Frame {
    std::size_t layer;
    std::uint32_t consumed;
    std::uint32_t points;
    std::uint64_t row_offset;  // global row of this frame's first input point
  };

  for (std::uint64_t base = 0; base < total_points; base += tile) {
    const std::uint32_t pts =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(tile, total_points - base));

    // Stage in the input tile of the group.
    MemoryTileInfo in;
    in.layer_id = 0;
    in.capacity = pts * dims[0].in_ch;
    in.remaining = in.capacity;
    in.valid = true;
    stack.push(in);
    on_event(FusionEvent{FusionEvent::Kind::kPush, 0, pts});

    // Depth-first: a chunk's output is fully worked through the deeper
    // layers before the parent resumes with its next chunk.
    std::vector<Frame> work;
    work.push_back({0, 0, pts, base});
    while (!work.empty()) {
      const Frame f = work.back();
      const std::size_t layer = f.layer;
      const std::uint32_t chunk =
          layer == 0 ? f.points : std::min(granularity, f.points - f.consumed);
      const std::uint64_t global_row = f.row_offset + f.consumed;

      on_compute(layer, global_row, f.consumed, chunk);
      on_event(FusionEvent{FusionEvent::Kind::kCompute, static_cast<std::int32_t>(layer), chunk});
      work.back().consumed += chunk;

      // Consume from this layer's input tile; release once drained, else
      // shrink to the unused part.
      MemoryTileInfo& t = stack.top();
      assert(t.layer_id == static_cast<std::int32_t>(layer));
      t.remaining -= chunk * dims[layer].in_ch;
      if (t.remaining == 0) {
        stack.pop();
        on_event(FusionEvent{FusionEvent::Kind::kRelease, static_cast<std::int32_t>(layer), 0});
        work.pop_back();
      } else {
        t.capacity = t.remaining;
        on_event(FusionEvent{FusionEvent::Kind::kShrink, static_cast<std::int32_t>(layer),
                             t.remaining / dims[layer].in_ch});
      }

      if (layer + 1 < num_layers) {
        // Push the chunk's output as the next layer's input tile.
        MemoryTileInfo next;
        next.layer_id = static_cast<std::int32_t>(layer + 1);
        next.capacity = chunk * dims[layer + 1].in_ch;
        next.remaining = next.capacity;
        next.valid = true;
        stack.push(next);
        on_event(FusionEvent{FusionEvent::Kind::kPush, next.layer_id, chunk});
        work.push_back({layer + 1, 0, chunk, global_row});
      }
    }
    on_event(FusionEvent{FusionEvent::Kind::kAdvanceTile, -1, 0});
  }
  return stack.peak_capacity();
}

}  // namespace

std::uint64_t fused_peak_entries(const std::vector<FcDims>& dims, std::uint32_t tile) {
  if (dims.empty()) return 0;
  // One representative outer tile plus the prefetch reservation for the
  // next input tile (double buffering).
  const std::uint64_t peak =
      walk_fused_group(dims, tile, tile,
                       [](std::size_t, std::uint64_t, std::uint32_t, std::uint32_t) {},
                       [](const FusionEvent&) {});
  return peak + static_cast<std::uint64_t>(tile) * dims[0].in_ch;
}

FusionPlan fusion_schedule(const std::vector<FcDims>& chain, std::uint64_t buffer_capacity) {
  if (chain.empty()) throw std::invalid_argument("fusion_schedule: empty chain");
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (chain[i].in_ch != chain[i - 1].out_ch)
      throw ConfigError("fusion_schedule: channel mismatch between consecutive layers");

  constexpr std::uint32_t kMaxTile = 1u << 16;

  FusionPlan plan;
  std::uint32_t first = 0;
  while (first < chain.size()) {
    bool placed = false;
    // Longest prefix first, then the largest power-of-two tile that fits.
    for (std::uint32_t len = static_cast<std::uint32_t>(chain.size()) - first; len >= 1 && !placed;
         --len) {
      const std::vector<FcDims> dims(chain.begin() + first, chain.begin() + first + len);
      for (std::uint32_t tile = kMaxTile; tile >= 1; tile >>= 1) {
        if (fused_peak_entries(dims, tile) <= buffer_capacity) {
          plan.groups.push_back({first, len, tile});
          first += len;
          placed = true;
          break;
        }
      }
    }
    if (!placed)
      throw ConfigError("fusion_schedule: layer " + std::to_string(first) +
                        " does not fit the buffer at any tile size");
  }
  return plan;
}

FusedResult fused_execute(const FusionPlan& plan, const FeatureMatrix& input,
                          const std::vector<WeightStack>& weights, const DramModel& dram,
                          std::uint64_t buffer_capacity, bool final_outputs) {
  FusedResult res;
  PerfCounters& pc = res.counters;

  FeatureMatrix cur = input;
  std::size_t layer_base = 0;
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    const auto& group = plan.groups[g];
    if (group.first_layer != layer_base) throw InternalError("fused_execute: plan out of order");
    std::vector<FcDims> dims;
    std::vector<const WeightStack*> ws;
    for (std::uint32_t l = 0; l < group.num_layers; ++l) {
      const WeightStack& w = weights.at(layer_base + l);
      if (w.num_weights() != 1) throw std::invalid_argument("fused_execute: FC weights expected");
      dims.push_back({w.in_ch(), w.out_ch()});
      ws.push_back(&w);
    }
    if (dims.front().in_ch != cur.cols()) throw ConfigError("fused_execute: channel mismatch");

    const std::uint64_t n = cur.rows();
    FeatureMatrix out(n, dims.back().out_ch, 0.0f);
    // Working copies per layer depth: rows flow tile by tile, so a single
    // scratch block per layer suffices.
    std::vector<FeatureMatrix> scratch(dims.size() + 1);

    auto compute = [&](std::size_t layer, std::uint64_t global_row, std::uint32_t local_row,
                       std::uint32_t rows) {
      // Layer 0 reads straight from the group input; deeper layers read
      // their parent chunk's scratch block (local offsets).
      const FeatureMatrix& src = layer == 0 ? cur : scratch[layer];
      const std::size_t src_off = layer == 0 ? global_row : local_row;
      FeatureMatrix block(rows, dims[layer].out_ch, 0.0f);
      const auto& k = kern::active();
      for (std::uint32_t r = 0; r < rows; ++r) {
        const float* in_row = src.row(src_off + r);
        float* dst = block.row(r);
        for (std::uint32_t c = 0; c < dims[layer].in_ch; ++c)
          k.axpy(dims[layer].out_ch, in_row[c], ws[layer]->row(0, c), dst);
      }
      pc.macs += static_cast<std::uint64_t>(rows) * dims[layer].in_ch * dims[layer].out_ch;
      pc.input_buf.reads += static_cast<std::uint64_t>(rows) * dims[layer].in_ch;
      pc.output_buf.writes += static_cast<std::uint64_t>(rows) * dims[layer].out_ch;
      pc.mxu_cycles += mxu_cycles(rows, dims[layer].in_ch, dims[layer].out_ch, mxu_rows, mxu_cols);

      if (layer + 1 < dims.size()) {
        scratch[layer + 1] = std::move(block);
      } else {
        for (std::uint32_t r = 0; r < rows; ++r)
          std::copy_n(block.row(r), dims[layer].out_ch, out.row(global_row + r));
      }
    };

    std::uint64_t peak = walk_fused_group(dims, group.tile, n, compute,
                                          [&](const FusionEvent& e) { res.trace.push_back(e); });
    peak += static_cast<std::uint64_t>(group.tile) * dims[0].in_ch;  // prefetch reservation
    res.peak_entries = std::max(res.peak_entries, peak);
    if (peak > buffer_capacity) throw InternalError("fused_execute: plan exceeds buffer capacity");

    // DRAM: the group reads its input once and writes its output once;
    // everything in between stays on chip.
    const std::uint64_t in_bytes = n * dims.front().in_ch * kF;
    const std::uint64_t out_bytes = n * dims.back().out_ch * kF;
    if (g == 0)
      pc.dram.input_features += in_bytes;
    else
      pc.dram.intermediates += in_bytes;
    if (g + 1 == plan.groups.size() && final_outputs)
      pc.dram.outputs += out_bytes;
    else
      pc.dram.intermediates += out_bytes;
    for (const WeightStack* w : ws) pc.dram.weights += w->bytes();

    cur = std::move(out);
    layer_base += group.num_layers;
  }
  pc.dram_cycles = dram.cycles_for(pc.dram.total());

  res.features = std::move(cur);
  return res;
}

DramTrafficReport dram_traffic_report(const PerfCounters& pc) {
  DramTrafficReport r;
  r.input_features = pc.dram.input_features;
  r.weights = pc.dram.weights;
  r.outputs = pc.dram.outputs;
  r.intermediates = pc.dram.intermediates;
  r.total = pc.dram.total();
  return r;
}

}  // namespace pointsim
