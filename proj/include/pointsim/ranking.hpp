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

// Functional model of the ranking pipeline: a fixed-width bitonic sorter,
// a streaming merger that handles arbitrary-length sorted inputs via a
// forwarding loop, arbitrary-length sort and truncated top-k built on top
// of it, and an intersection detector over merged streams.
//
// All operations are pure; cycle accounting is accumulated into an
// optional MpuCounters per invocation.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pointsim/common.hpp"
#include "pointsim/coord.hpp"

namespace pointsim {

enum class Origin : std::uint8_t { kInputCloud = 0, kOutputCloud = 1 };

// One element flowing through the comparator network: a key (coordinate
// or distance) plus payload. Invalid entries act as +infinity so the
// sorting network stays oblivious to padding.
template <typename Key>
struct Entry {
  Key key{};
  std::uint32_t payload = 0;
  Origin origin = Origin::kInputCloud;
  bool valid = true;
};

inline int key_compare(const Coord& a, const Coord& b) { return canonical_compare(a, b); }
inline int key_compare(std::uint64_t a, std::uint64_t b) { return a < b ? -1 : (a > b ? 1 : 0); }
inline int key_compare(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

// Strict total order: invalid entries sink to the end; among valid ones
// keys ascend; equal keys put input-cloud entries before output-cloud
// ones (so intersecting pairs are adjacent); remaining ties break by
// payload for determinism.
template <typename Key>
inline bool entry_less(const Entry<Key>& a, const Entry<Key>& b) {
  if (a.valid != b.valid) return a.valid;
  if (!a.valid) return false;
  const int c = key_compare(a.key, b.key);
  if (c != 0) return c < 0;
  if (a.origin != b.origin) return a.origin == Origin::kInputCloud;
  return a.payload < b.payload;
}

// Pipeline geometry shared by all ranking operations.
struct RankingConfig {
  std::size_t merger_width = 64;  // N; the merger consumes windows of N/2
  unsigned pipeline_depth = 6;    // stages traversed before the first output
};

// Per-invocation accounting. `cycles` follows the closed-form model in
// timing.hpp; element counters feed the sorter-buffer SRAM traffic.
struct MpuCounters {
  std::uint64_t cycles = 0;
  std::uint64_t merge_steps = 0;
  std::uint64_t bitonic_passes = 0;
  std::uint64_t elements_read = 0;
  std::uint64_t elements_written = 0;

  MpuCounters& operator+=(const MpuCounters& o) {
    cycles += o.cycles;
    merge_steps += o.merge_steps;
    bitonic_passes += o.bitonic_passes;
    elements_read += o.elements_read;
    elements_written += o.elements_written;
    return *this;
  }
};

// ---------------------------------------------------------------------------
// Fixed-width bitonic sorter
// ---------------------------------------------------------------------------

// Sorts at most `width` entries (width a power of two) in one pass of the
// comparator network; input is padded with invalid entries up to width.
template <typename Key>
std::vector<Entry<Key>> bitonic_sort_fixed(std::span<const Entry<Key>> entries, std::size_t width,
                                           MpuCounters* mpu = nullptr) {
  if (!is_pow2(width)) throw std::invalid_argument("bitonic_sort_fixed: width must be a power of two");
  if (entries.size() > width)
    throw std::invalid_argument("bitonic_sort_fixed: input longer than sorter width");

  std::vector<Entry<Key>> e(entries.begin(), entries.end());
  e.resize(width, Entry<Key>{Key{}, 0, Origin::kInputCloud, false});

  for (std::size_t k = 2; k <= width; k <<= 1) {
    for (std::size_t j = k >> 1; j > 0; j >>= 1) {
      for (std::size_t i = 0; i < width; ++i) {
        const std::size_t l = i ^ j;
        if (l <= i) continue;
        const bool ascending = (i & k) == 0;
        if (ascending ? entry_less(e[l], e[i]) : entry_less(e[i], e[l])) std::swap(e[i], e[l]);
      }
    }
  }
  if (mpu) {
    mpu->cycles += 1;  // one pass through the spatial network
    mpu->bitonic_passes += 1;
    mpu->elements_read += width;
    mpu->elements_written += width;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Streaming merger (arbitrary-length MergeSort)
// ---------------------------------------------------------------------------

enum class WindowSide : std::uint8_t { kA, kB };

// State of the forwarding loop between merger steps. `finalized_*` are
// cursors past the elements whose final position is already decided;
// `window_*` are the bases of the windows currently presented to the
// merger. The carry buffer holds finalized entries that did not fit the
// output port (never more than N/2).
template <typename Key>
struct MergeState {
  std::size_t window_a = 0, window_b = 0;
  std::size_t finalized_a = 0, finalized_b = 0;
  std::vector<Entry<Key>> carry;
  std::size_t steps = 0;
};

// One step of the streaming merger. `a` and `b` are the full sorted
// streams; the step looks only at the current N/2-entry window of each
// (short tails behave as if padded with invalid entries). Exactly one
// window is consumed: the one whose last key is smaller. Entries above
// the threshold (the consumed window's last key) are withheld in the
// carry buffer; at most N/2 finalized entries are appended to `out`.
template <typename Key>
WindowSide merge_step(MergeState<Key>& st, std::span<const Entry<Key>> a,
                      std::span<const Entry<Key>> b, std::size_t merger_width,
                      std::vector<Entry<Key>>& out) {
  const std::size_t h = merger_width / 2;
  const std::size_t end_a = std::min(a.size(), st.window_a + h);
  const std::size_t end_b = std::min(b.size(), st.window_b + h);

  // Window-last comparison; a window shorter than N/2 ends in padding and
  // its last key reads as +infinity.
  const bool a_full = (end_a == st.window_a + h);
  const bool b_full = (end_b == st.window_b + h);
  const Entry<Key> inf{Key{}, 0, Origin::kInputCloud, false};
  const Entry<Key>& last_a = a_full ? a[end_a - 1] : inf;
  const Entry<Key>& last_b = b_full ? b[end_b - 1] : inf;

  // Consume B on ties (including the all-padding drain case).
  const WindowSide consumed = entry_less(last_a, last_b) ? WindowSide::kA : WindowSide::kB;
  const Entry<Key>& threshold = consumed == WindowSide::kA ? last_a : last_b;

  // Merge the not-yet-finalized parts of both windows.
  std::span<const Entry<Key>> fa = a.subspan(st.finalized_a, end_a - st.finalized_a);
  std::span<const Entry<Key>> fb = b.subspan(st.finalized_b, end_b - st.finalized_b);
  std::vector<Entry<Key>> line = std::move(st.carry);
  line.reserve(line.size() + fa.size() + fb.size());
  std::size_t ia = 0, ib = 0;
  while (ia < fa.size() && ib < fb.size())
    line.push_back(entry_less(fb[ib], fa[ia]) ? fb[ib++] : fa[ia++]);
  line.insert(line.end(), fa.begin() + static_cast<std::ptrdiff_t>(ia), fa.end());
  line.insert(line.end(), fb.begin() + static_cast<std::ptrdiff_t>(ib), fb.end());

  // An entry is final once it cannot be preceded by anything still
  // upstream, i.e. its key does not exceed the threshold.
  const auto is_final = [&](const Entry<Key>& e) {
    return e.valid && !entry_less(threshold, e);
  };

  std::size_t emitted = 0;
  std::vector<Entry<Key>> next_carry;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (!line[i].valid) break;  // padding sinks to the end
    if (emitted < h) {
      assert(is_final(line[i]) && "non-final entry in the output window");
      out.push_back(line[i]);
      ++emitted;
    } else if (is_final(line[i])) {
      next_carry.push_back(line[i]);
    } else {
      break;  // sorted, so nothing further is final either
    }
  }
  assert(next_carry.size() <= h && "carry buffer overflow");
  st.carry = std::move(next_carry);

  // Advance: the consumed window moves on wholesale; the kept window only
  // retires the entries the threshold finalized.
  const auto count_final = [&](std::span<const Entry<Key>> fresh) {
    std::size_t n = 0;
    while (n < fresh.size() && is_final(fresh[n])) ++n;
    return n;
  };
  if (consumed == WindowSide::kA) {
    st.window_a += h;
    st.finalized_a = end_a;
    st.finalized_b += count_final(fb);
  } else {
    st.window_b += h;
    st.finalized_b = end_b;
    st.finalized_a += count_final(fa);
  }
  ++st.steps;
  return consumed;
}

// Merges two sorted streams of arbitrary length by iterating merge_step.
// Drains in exactly ceil((|a|+|b|) / (N/2)) steps.
template <typename Key>
std::vector<Entry<Key>> mergesort_stream(std::span<const Entry<Key>> a,
                                         std::span<const Entry<Key>> b,
                                         const RankingConfig& cfg = {},
                                         MpuCounters* mpu = nullptr) {
  const std::size_t h = cfg.merger_width / 2;
  if (!is_pow2(cfg.merger_width) || h == 0)
    throw std::invalid_argument("mergesort_stream: merger width must be a power of two >= 2");

  std::vector<Entry<Key>> out;
  const std::size_t total = a.size() + b.size();
  out.reserve(total);
  MergeState<Key> st;
  while (out.size() < total) merge_step(st, a, b, cfg.merger_width, out);
  assert(st.steps == ceil_div(total, h) && "merger drained in an unexpected number of steps");

  if (mpu) {
    mpu->cycles += st.steps + cfg.pipeline_depth;
    mpu->merge_steps += st.steps;
    mpu->elements_read += total;
    mpu->elements_written += total;
  }
  return out;
}

template <typename Key>
std::vector<Entry<Key>> mergesort_stream(const std::vector<Entry<Key>>& a,
                                         const std::vector<Entry<Key>>& b,
                                         const RankingConfig& cfg = {},
                                         MpuCounters* mpu = nullptr) {
  return mergesort_stream(std::span<const Entry<Key>>(a), std::span<const Entry<Key>>(b), cfg, mpu);
}

// ---------------------------------------------------------------------------
// Arbitrary-length Sort / TopK
// ---------------------------------------------------------------------------

namespace detail {

// Shared tree reduction: bitonic-sort N-wide chunks, then merge pairs of
// runs level by level. truncate == 0 keeps full runs (Sort); otherwise
// every intermediate run is clipped to `truncate` entries (TopK).
template <typename Key>
std::vector<Entry<Key>> sort_tree(std::span<const Entry<Key>> entries, std::size_t truncate,
                                  const RankingConfig& cfg, MpuCounters* mpu) {
  const std::size_t n = entries.size();
  std::vector<std::vector<Entry<Key>>> runs;
  runs.reserve(ceil_div(n, cfg.merger_width));
  for (std::size_t base = 0; base < n; base += cfg.merger_width) {
    const std::size_t len = std::min(cfg.merger_width, n - base);
    auto run = bitonic_sort_fixed(entries.subspan(base, len), cfg.merger_width, mpu);
    run.resize(len);  // drop the padding
    if (truncate && run.size() > truncate) run.resize(truncate);
    runs.push_back(std::move(run));
  }
  if (runs.empty()) return {};

  MpuCounters merges;
  while (runs.size() > 1) {
    std::vector<std::vector<Entry<Key>>> next;
    next.reserve((runs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < runs.size(); i += 2) {
      auto merged = mergesort_stream(std::span<const Entry<Key>>(runs[i]),
                                     std::span<const Entry<Key>>(runs[i + 1]), cfg, &merges);
      if (truncate && merged.size() > truncate) merged.resize(truncate);
      next.push_back(std::move(merged));
    }
    if (runs.size() % 2) next.push_back(std::move(runs.back()));
    runs = std::move(next);
  }
  if (mpu) {
    *mpu += merges;
    mpu->cycles += cfg.pipeline_depth;  // initial fill of the bitonic stage
  }
  return std::move(runs.front());
}

}  // namespace detail

// Fully sorts an arbitrary-length array: one bitonic pass per N-element
// chunk, then ceil(log2(#chunks)) rounds of streaming merges.
template <typename Key>
std::vector<Entry<Key>> sort_arbitrary(std::span<const Entry<Key>> entries,
                                       const RankingConfig& cfg = {}, MpuCounters* mpu = nullptr) {
  return detail::sort_tree(entries, 0, cfg, mpu);
}

// k smallest entries, sorted. Same dataflow as sort_arbitrary but every
// intermediate run is truncated to k, which is where the traffic savings
// show up in the counters. k > n returns everything sorted.
template <typename Key>
std::vector<Entry<Key>> topk(std::span<const Entry<Key>> entries, std::size_t k,
                             const RankingConfig& cfg = {}, MpuCounters* mpu = nullptr) {
  if (k == 0) return {};
  auto run = detail::sort_tree(entries, k, cfg, mpu);
  if (run.size() > k) run.resize(k);
  return run;
}

// ---------------------------------------------------------------------------
// Intersection detector
// ---------------------------------------------------------------------------

// Scans a merged sorted array and pairs adjacent entries with equal keys
// and different origins: (input payload, output payload). Every entry
// participates in at most one pair. Requires the per-cloud inputs to be
// deduplicated; two adjacent equal keys of the same origin trip a debug
// assertion.
template <typename Key>
std::vector<std::pair<std::uint32_t, std::uint32_t>> detect_intersection(
    std::span<const Entry<Key>> merged) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::size_t i = 0;
  while (i + 1 < merged.size()) {
    const Entry<Key>& cur = merged[i];
    const Entry<Key>& nxt = merged[i + 1];
    if (!cur.valid) break;
    if (nxt.valid && key_compare(cur.key, nxt.key) == 0) {
      assert(cur.origin != nxt.origin && "duplicate key within one cloud");
      if (cur.origin == Origin::kInputCloud && nxt.origin == Origin::kOutputCloud) {
        pairs.emplace_back(cur.payload, nxt.payload);
        i += 2;
        continue;
      }
      if (cur.origin == Origin::kOutputCloud && nxt.origin == Origin::kInputCloud) {
        pairs.emplace_back(nxt.payload, cur.payload);
        i += 2;
        continue;
      }
    }
    ++i;
  }
  return pairs;
}

using CoordEntry = Entry<Coord>;
using DistEntry = Entry<std::uint64_t>;

}  // namespace pointsim
