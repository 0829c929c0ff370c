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

// The four mapping operations, each expressed through the ranking kernel:
// kernel mapping (merge + intersection), farthest point sampling (running
// min/max forwarding), kNN (top-k on distances) and ball query (top-k plus
// radius filter). kernel_map_oracle is the associative-lookup reference.

#include <cstdint>
#include <vector>

#include "pointsim/ranking.hpp"
#include "pointsim/sparse_tensor.hpp"

namespace pointsim {

// One (input point, output point, weight) relation. `padded` marks ball
// query fill-up duplicates, which aggregation ignores.
struct MapTuple {
  std::uint32_t input_idx = 0;
  std::uint32_t output_idx = 0;
  std::uint32_t weight_idx = 0;
  bool padded = false;

  bool operator==(const MapTuple& o) const {
    return input_idx == o.input_idx && output_idx == o.output_idx && weight_idx == o.weight_idx &&
           padded == o.padded;
  }
};

// Tuples in weight-major, then output-major order, plus per-weight counts.
struct MapSet {
  std::vector<MapTuple> tuples;
  std::uint32_t num_weights = 0;
  std::vector<std::uint32_t> weight_counts;   // tuples per weight index
  std::vector<std::uint32_t> empty_queries;   // ball query: queries with no neighbor in range

  std::size_t size() const { return tuples.size(); }
  void recount();  // rebuilds weight_counts from tuples
};

// Offsets for a K^D kernel, axis range {-floor(K/2) .. floor((K-1)/2)}
// scaled by `step` (the input tensor stride), enumerated in canonical
// coordinate order. The enumeration index is the weight index.
std::vector<Coord> kernel_offsets(int kernel_size, int dim, std::int32_t step);

// For each offset d: shift the input cloud by -d, merge-sort against the
// output cloud and detect equal-coordinate pairs. A pair (p, q) means
// p = q + d and yields (p, q, weight_idx(d)). Both clouds must be
// canonically sorted and deduplicated.
MapSet kernel_map(const SparseTensor& input, const SparseTensor& output,
                  const std::vector<Coord>& offsets, const RankingConfig& cfg = {},
                  MpuCounters* mpu = nullptr);

// Hash-lookup implementation of the same contract; used as correctness
// oracle for kernel_map.
MapSet kernel_map_oracle(const SparseTensor& input, const SparseTensor& output,
                         const std::vector<Coord>& offsets);

// Iteratively selects the point with the largest minimum squared distance
// to the already-selected set, starting from seed_idx. Per-point state is
// updated incrementally against the newest selection. Ties break toward
// the smallest index.
std::vector<std::uint32_t> farthest_point_sampling(const SparseTensor& cloud, std::size_t m,
                                                   std::uint32_t seed_idx = 0,
                                                   MpuCounters* mpu = nullptr,
                                                   const RankingConfig& cfg = {});

// For each query point, the k nearest input points by squared Euclidean
// distance (exact integers; ties by smaller input index). weight_idx is
// the neighbor rank 0..k-1. k > |input| ranks every point.
MapSet knn(const SparseTensor& input, const SparseTensor& queries, std::size_t k,
           const RankingConfig& cfg = {}, MpuCounters* mpu = nullptr);

// kNN restricted to squared distance <= radius^2. Queries with fewer than
// k in-range neighbors are padded by repeating the nearest one (tuples
// flagged `padded`); queries with none are listed in empty_queries.
MapSet ball_query(const SparseTensor& input, const SparseTensor& queries, std::size_t k,
                  double radius, const RankingConfig& cfg = {}, MpuCounters* mpu = nullptr);

}  // namespace pointsim
