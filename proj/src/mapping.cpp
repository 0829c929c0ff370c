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

#include "pointsim/mapping.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "pointsim/kernels.hpp"

namespace pointsim {

void MapSet::recount() {
  weight_counts.assign(num_weights, 0);
  for (const MapTuple& t : tuples) {
    if (t.weight_idx >= num_weights) {
      num_weights = t.weight_idx + 1;
      weight_counts.resize(num_weights, 0);
    }
    ++weight_counts[t.weight_idx];
  }
}

std::vector<Coord> kernel_offsets(int kernel_size, int dim, std::int32_t step) {
  if (kernel_size < 1) throw std::invalid_argument("kernel_offsets: kernel size must be >= 1");
  if (dim != 2 && dim != 3) throw std::invalid_argument("kernel_offsets: dim must be 2 or 3");
  const std::int32_t lo = -(kernel_size / 2);
  const std::int32_t hi = (kernel_size - 1) / 2;

  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= static_cast<std::size_t>(kernel_size);
  std::vector<Coord> offsets;
  offsets.reserve(count);
  if (dim == 2) {
    for (std::int32_t x = lo; x <= hi; ++x)
      for (std::int32_t y = lo; y <= hi; ++y) offsets.emplace_back(x * step, y * step);
  } else {
    for (std::int32_t x = lo; x <= hi; ++x)
      for (std::int32_t y = lo; y <= hi; ++y)
        for (std::int32_t z = lo; z <= hi; ++z) offsets.emplace_back(x * step, y * step, z * step);
  }
  return offsets;
}

namespace {

void check_cloud(const SparseTensor& t, const char* who) {
  (void)t;
  (void)who;
  assert(t.canonically_sorted() && "cloud must be canonically sorted and deduplicated");
}

}  // namespace

MapSet kernel_map(const SparseTensor& input, const SparseTensor& output,
                  const std::vector<Coord>& offsets, const RankingConfig& cfg, MpuCounters* mpu) {
  check_cloud(input, "kernel_map input");
  check_cloud(output, "kernel_map output");

  MapSet maps;
  maps.num_weights = static_cast<std::uint32_t>(offsets.size());
  maps.weight_counts.assign(offsets.size(), 0);
  if (!input.coords.empty() && !offsets.empty() && offsets.front().dim() != input.dim())
    throw std::invalid_argument("kernel_map: offset dimensionality mismatch");

  std::vector<CoordEntry> shifted(input.size());
  std::vector<CoordEntry> outs(output.size());
  for (std::size_t i = 0; i < output.size(); ++i)
    outs[i] = {output.coords[i], static_cast<std::uint32_t>(i), Origin::kOutputCloud, true};

  for (std::uint32_t w = 0; w < offsets.size(); ++w) {
    const Coord delta = offsets[w];
    // Shifting by a constant preserves the canonical order.
    for (std::size_t i = 0; i < input.size(); ++i)
      shifted[i] = {input.coords[i] - delta, static_cast<std::uint32_t>(i), Origin::kInputCloud, true};

    const auto merged = mergesort_stream(std::span<const CoordEntry>(shifted),
                                         std::span<const CoordEntry>(outs), cfg, mpu);
    const auto pairs = detect_intersection(std::span<const CoordEntry>(merged));
    maps.weight_counts[w] = static_cast<std::uint32_t>(pairs.size());
    for (const auto& [p, q] : pairs) maps.tuples.push_back({p, q, w, false});
  }
  return maps;
}

MapSet kernel_map_oracle(const SparseTensor& input, const SparseTensor& output,
                         const std::vector<Coord>& offsets) {
  check_cloud(input, "kernel_map_oracle input");
  check_cloud(output, "kernel_map_oracle output");

  std::unordered_map<Coord, std::uint32_t, CoordHash> table;
  table.reserve(input.size() * 2);
  for (std::size_t i = 0; i < input.size(); ++i)
    table.emplace(input.coords[i], static_cast<std::uint32_t>(i));

  MapSet maps;
  maps.num_weights = static_cast<std::uint32_t>(offsets.size());
  maps.weight_counts.assign(offsets.size(), 0);
  for (std::uint32_t w = 0; w < offsets.size(); ++w) {
    for (std::size_t q = 0; q < output.size(); ++q) {
      const auto it = table.find(output.coords[q] + offsets[w]);
      if (it != table.end()) {
        maps.tuples.push_back({it->second, static_cast<std::uint32_t>(q), w, false});
        ++maps.weight_counts[w];
      }
    }
  }
  return maps;
}

namespace {

// Split coordinates into per-axis arrays for the distance kernels.
struct SoaCoords {
  std::vector<std::int32_t> x, y, z;
  bool has_z = false;

  explicit SoaCoords(const std::vector<Coord>& coords) {
    const std::size_t n = coords.size();
    x.resize(n);
    y.resize(n);
    has_z = !coords.empty() && coords.front().dim() == 3;
    if (has_z) z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = coords[i][0];
      y[i] = coords[i][1];
      if (has_z) z[i] = coords[i][2];
    }
  }

  const std::int32_t* zs() const { return has_z ? z.data() : nullptr; }
};

}  // namespace

std::vector<std::uint32_t> farthest_point_sampling(const SparseTensor& cloud, std::size_t m,
                                                   std::uint32_t seed_idx, MpuCounters* mpu,
                                                   const RankingConfig& cfg) {
  const std::size_t n = cloud.size();
  if (m < 1 || m > n) throw std::invalid_argument("farthest_point_sampling: need 1 <= m <= n");
  if (seed_idx >= n) throw std::invalid_argument("farthest_point_sampling: seed out of range");

  const auto& k = kern::active();
  SoaCoords soa(cloud.coords);
  std::vector<std::uint64_t> dist(n, std::numeric_limits<std::uint64_t>::max());
  std::vector<std::uint32_t> selected;
  selected.reserve(m);
  selected.push_back(seed_idx);

  std::uint32_t newest = seed_idx;
  for (std::size_t t = 1; t < m; ++t) {
    const Coord& p = cloud.coords[newest];
    k.sqdist_min(n, soa.x.data(), soa.y.data(), soa.zs(), p[0], p[1], soa.has_z ? p[2] : 0,
                 dist.data());
    dist[newest] = 0;
    // Running max across the scan; ties keep the earliest index.
    std::uint32_t best = 0;
    std::uint64_t best_d = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] > best_d) {
        best_d = dist[i];
        best = static_cast<std::uint32_t>(i);
      }
    }
    selected.push_back(best);
    newest = best;
  }
  // Distance forwarding makes each selection one traversal of the cloud.
  if (mpu) mpu->cycles += m * (ceil_div(n, cfg.merger_width) + cfg.pipeline_depth);
  return selected;
}

namespace {

MapSet knn_impl(const SparseTensor& input, const SparseTensor& queries, std::size_t k,
                const RankingConfig& cfg, MpuCounters* mpu, double radius_sq, bool ball) {
  if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
  if (input.size() == 0) throw std::invalid_argument("knn: empty input cloud");
  const std::size_t n = input.size();
  const std::size_t kk = std::min(k, n);

  const auto& kt = kern::active();
  SoaCoords soa(input.coords);
  std::vector<std::uint64_t> dist(n);
  std::vector<DistEntry> entries(n);

  MapSet maps;
  maps.num_weights = static_cast<std::uint32_t>(k);
  maps.weight_counts.assign(k, 0);

  for (std::size_t q = 0; q < queries.size(); ++q) {
    const Coord& p = queries.coords[q];
    kt.sqdist_fill(n, soa.x.data(), soa.y.data(), soa.zs(), p[0], p[1], soa.has_z ? p[2] : 0,
                   dist.data());
    for (std::size_t i = 0; i < n; ++i)
      entries[i] = {dist[i], static_cast<std::uint32_t>(i), Origin::kInputCloud, true};

    const auto best = topk(std::span<const DistEntry>(entries), kk, cfg, mpu);

    if (!ball) {
      for (std::uint32_t rank = 0; rank < best.size(); ++rank) {
        maps.tuples.push_back({best[rank].payload, static_cast<std::uint32_t>(q), rank, false});
        ++maps.weight_counts[rank];
      }
      continue;
    }

    std::uint32_t in_range = 0;
    while (in_range < best.size() &&
           static_cast<double>(best[in_range].key) <= radius_sq)
      ++in_range;
    if (in_range == 0) {
      maps.empty_queries.push_back(static_cast<std::uint32_t>(q));
      continue;
    }
    for (std::uint32_t rank = 0; rank < k; ++rank) {
      const bool pad = rank >= in_range;
      const std::uint32_t neighbor = pad ? best[0].payload : best[rank].payload;
      maps.tuples.push_back({neighbor, static_cast<std::uint32_t>(q), rank, pad});
      ++maps.weight_counts[rank];
    }
  }
  return maps;
}

}  // namespace

MapSet knn(const SparseTensor& input, const SparseTensor& queries, std::size_t k,
           const RankingConfig& cfg, MpuCounters* mpu) {
  return knn_impl(input, queries, k, cfg, mpu, 0.0, false);
}

MapSet ball_query(const SparseTensor& input, const SparseTensor& queries, std::size_t k,
                  double radius, const RankingConfig& cfg, MpuCounters* mpu) {
  if (radius <= 0.0) throw std::invalid_argument("ball_query: radius must be positive");
  return knn_impl(input, queries, k, cfg, mpu, radius * radius, true);
}

}  // namespace pointsim
