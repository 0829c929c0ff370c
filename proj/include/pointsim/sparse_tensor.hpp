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

#include <cstddef>
#include <span>
#include <vector>

#include "pointsim/common.hpp"
#include "pointsim/coord.hpp"

namespace pointsim {

// Dense row-major float matrix; one row per point.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, float fill = 0.0f)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  float* row(std::size_t r) { return data_.data() + r * cols_; }
  const float* row(std::size_t r) const { return data_.data() + r * cols_; }
  std::span<const float> row_span(std::size_t r) const { return {row(r), cols_}; }

  float& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  bool operator==(const FeatureMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// How features of points that collapse onto the same voxel are combined.
enum class FeatureReduce { kFirst, kAverage };

// A point cloud at some layer: canonically sorted unique coordinates, one
// feature row per point, and the quantization granularity (tensor stride).
struct SparseTensor {
  std::vector<Coord> coords;
  FeatureMatrix features;
  std::uint32_t tensor_stride = 1;
  // Translation that was added to the raw coordinates to make them
  // nonnegative. Reports subtract it again for display.
  Coord translation;

  std::size_t size() const { return coords.size(); }
  int dim() const { return coords.empty() ? 3 : coords.front().dim(); }
  std::size_t channels() const { return features.cols(); }

  bool canonically_sorted() const {
    for (std::size_t i = 1; i < coords.size(); ++i)
      if (canonical_compare(coords[i - 1], coords[i]) >= 0) return false;
    return true;
  }
};

// Sorts coordinates canonically and merges duplicates. kFirst keeps the
// feature row of the first occurrence in input order; kAverage averages
// all rows that collapse together.
SparseTensor sort_dedup(std::vector<Coord> coords, FeatureMatrix features,
                        std::uint32_t tensor_stride = 1,
                        FeatureReduce reduce = FeatureReduce::kFirst);

// Clears the low log2(new_ts) bits of every coordinate (equivalently
// floor(p / new_ts) * new_ts for nonnegative p), then dedups. new_ts must
// be a power of two and >= the current stride; coordinates must be
// nonnegative (apply translate_nonnegative first).
SparseTensor quantize_coords(const SparseTensor& t, std::uint32_t new_ts,
                             FeatureReduce reduce = FeatureReduce::kFirst);

// Shifts all coordinates by a per-tensor offset so every axis is
// nonnegative, recording the offset in `translation`.
SparseTensor translate_nonnegative(SparseTensor t);

}  // namespace pointsim
