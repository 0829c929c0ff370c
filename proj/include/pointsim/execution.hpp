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

// Functional MatMul execution. Both sparse flows accumulate in the same
// fixed order (weight-major, then output-major, input channels ascending),
// so gather-matmul-scatter and fetch-on-demand produce bit-identical
// features and differ only in the traffic they generate.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pointsim/counters.hpp"
#include "pointsim/mapping.hpp"
#include "pointsim/memory.hpp"
#include "pointsim/sparse_tensor.hpp"

namespace pointsim {

// (num_weights, in_ch, out_ch) stack of weight matrices; num_weights is
// K^D for sparse convolution, the neighbor count for rank-indexed
// grouping, and 1 for FC layers.
class WeightStack {
 public:
  WeightStack() = default;
  WeightStack(std::uint32_t num_weights, std::uint32_t in_ch, std::uint32_t out_ch, float fill = 0.0f)
      : num_weights_(num_weights), in_ch_(in_ch), out_ch_(out_ch),
        data_(static_cast<std::size_t>(num_weights) * in_ch * out_ch, fill) {}

  std::uint32_t num_weights() const { return num_weights_; }
  std::uint32_t in_ch() const { return in_ch_; }
  std::uint32_t out_ch() const { return out_ch_; }

  // Row c of weight matrix n (length out_ch).
  const float* row(std::uint32_t n, std::uint32_t c) const {
    return data_.data() + (static_cast<std::size_t>(n) * in_ch_ + c) * out_ch_;
  }
  float* row(std::uint32_t n, std::uint32_t c) {
    return data_.data() + (static_cast<std::size_t>(n) * in_ch_ + c) * out_ch_;
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }
  std::uint64_t bytes() const { return data_.size() * sizeof(float); }

  static WeightStack identity(std::uint32_t num_weights, std::uint32_t ch);

 private:
  std::uint32_t num_weights_ = 0;
  std::uint32_t in_ch_ = 0;
  std::uint32_t out_ch_ = 0;
  std::vector<float> data_;
};

enum class AggMode { kSum, kMax };

// Hardware parameters the execution model needs.
struct ExecParams {
  std::uint32_t mxu_rows = 16;  // PEs along input channels
  std::uint32_t mxu_cols = 16;  // PEs along output channels
  DramModel dram;
};

struct ConvResult {
  FeatureMatrix features;
  PerfCounters counters;
};

// Baseline flow: per weight, gather the mapped input rows into a matrix,
// multiply, scatter-aggregate the partial sums. Input features cross DRAM
// three times (gather read, gathered-matrix write, MatMul read).
ConvResult conv_gather_scatter(const FeatureMatrix& input, const MapSet& maps,
                               const WeightStack& weights, AggMode agg, std::size_t out_size,
                               const ExecParams& params = {});

// Accelerator flow: walk the maps in the same order, fetch each input row
// through the cache (or straight from DRAM once when `cache` is null) and
// accumulate into resident output tiles. Numerically identical to
// conv_gather_scatter.
ConvResult conv_fetch_on_demand(const FeatureMatrix& input, const MapSet& maps,
                                const WeightStack& weights, AggMode agg, std::size_t out_size,
                                FeatureCache* cache, const ExecParams& params = {});

// Row-wise dense layer: out = in * W (+ bias). Weight stack must have
// num_weights == 1.
FeatureMatrix dense_fc(const FeatureMatrix& input, const WeightStack& weights,
                       const float* bias = nullptr);

// Reduces partial-sum rows grouped by output index. `group_of_row[r]` is
// the output each psum row belongs to; padded rows are ignored; outputs
// nobody touched are zero.
FeatureMatrix aggregate(const FeatureMatrix& psums, const std::vector<std::uint32_t>& group_of_row,
                        const std::vector<bool>& padded, std::size_t out_size, AggMode mode);

}  // namespace pointsim
