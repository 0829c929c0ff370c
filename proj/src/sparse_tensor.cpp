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

#include "pointsim/sparse_tensor.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pointsim {

SparseTensor sort_dedup(std::vector<Coord> coords, FeatureMatrix features,
                        std::uint32_t tensor_stride, FeatureReduce reduce) {
  if (coords.size() != features.rows())
    throw std::invalid_argument("sort_dedup: coords and features length mismatch");

  const std::size_t n = coords.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  // Stable so that among duplicates the first occurrence wins.
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return coord_less(coords[a], coords[b]);
  });

  SparseTensor out;
  out.tensor_stride = tensor_stride;
  out.coords.reserve(n);
  const std::size_t c = features.cols();

  std::vector<std::uint32_t> group_sizes;
  FeatureMatrix feats(n, c);
  std::size_t unique = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t src = order[i];
    if (unique > 0 && coords[src] == out.coords.back()) {
      if (reduce == FeatureReduce::kAverage) {
        float* dst = feats.row(unique - 1);
        const float* add = features.row(src);
        for (std::size_t j = 0; j < c; ++j) dst[j] += add[j];
        ++group_sizes.back();
      }
      continue;  // first-wins: drop the later row
    }
    out.coords.push_back(coords[src]);
    std::copy_n(features.row(src), c, feats.row(unique));
    group_sizes.push_back(1);
    ++unique;
  }

  if (reduce == FeatureReduce::kAverage) {
    for (std::size_t i = 0; i < unique; ++i) {
      if (group_sizes[i] > 1) {
        float* r = feats.row(i);
        const float inv = 1.0f / static_cast<float>(group_sizes[i]);
        for (std::size_t j = 0; j < c; ++j) r[j] *= inv;
      }
    }
  }

  FeatureMatrix packed(unique, c);
  for (std::size_t i = 0; i < unique; ++i) std::copy_n(feats.row(i), c, packed.row(i));
  out.features = std::move(packed);
  return out;
}

SparseTensor quantize_coords(const SparseTensor& t, std::uint32_t new_ts, FeatureReduce reduce) {
  if (!is_pow2(new_ts)) throw std::invalid_argument("quantize_coords: tensor stride must be a power of two");
  if (new_ts < t.tensor_stride)
    throw std::invalid_argument("quantize_coords: new stride smaller than current stride");

  const std::int32_t mask = ~static_cast<std::int32_t>(new_ts - 1);
  std::vector<Coord> q = t.coords;
  for (Coord& p : q) {
    for (int a = 0; a < p.dim(); ++a) {
      assert(p[a] >= 0 && "quantize_coords requires nonnegative coordinates");
      p[a] &= mask;
    }
  }
  SparseTensor out = sort_dedup(std::move(q), t.features, new_ts, reduce);
  out.translation = t.translation;
  return out;
}

SparseTensor translate_nonnegative(SparseTensor t) {
  if (t.coords.empty()) return t;
  const int d = t.dim();
  Coord mins = t.coords.front();
  for (const Coord& p : t.coords)
    for (int a = 0; a < d; ++a) mins[a] = std::min(mins[a], p[a]);

  Coord shift = Coord::zero(d);
  bool any = false;
  for (int a = 0; a < d; ++a) {
    if (mins[a] < 0) {
      // Keep coordinates multiples of the stride after shifting.
      const std::int32_t ts = static_cast<std::int32_t>(t.tensor_stride);
      shift[a] = ((-mins[a] + ts - 1) / ts) * ts;
      any = true;
    }
  }
  if (!any) return t;
  for (Coord& p : t.coords) p = p + shift;
  if (t.translation.dim() != d) t.translation = Coord::zero(d);
  t.translation = t.translation + shift;
  return t;
}

}  // namespace pointsim
