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

#include "pointsim/execution.hpp"

#include <algorithm>

#include "pointsim/kernels.hpp"
#include "pointsim/timing.hpp"

namespace pointsim {

WeightStack WeightStack::identity(std::uint32_t num_weights, std::uint32_t ch) {
  WeightStack w(num_weights, ch, ch);
  for (std::uint32_t n = 0; n < num_weights; ++n)
    for (std::uint32_t c = 0; c < ch; ++c) w.row(n, c)[c] = 1.0f;
  return w;
}

namespace {

constexpr std::uint64_t kF = sizeof(float);

void check_maps(const MapSet& maps, const FeatureMatrix& input, const WeightStack& w,
                std::size_t out_size) {
  if (w.in_ch() != input.cols())
    throw std::invalid_argument("conv: weight in_ch does not match input features");
  if (maps.num_weights > w.num_weights())
    throw std::invalid_argument("conv: map set references more weights than provided");
  for (const MapTuple& t : maps.tuples) {
    if (t.input_idx >= input.rows() || t.output_idx >= out_size || t.weight_idx >= w.num_weights())
      throw std::invalid_argument("conv: map tuple index out of range");
  }
}

// psum[q] += f * W_n, one axpy per input channel; every path accumulates
// through this so flow equivalence is bitwise.
inline void mac_row(const float* f, const WeightStack& w, std::uint32_t n, float* psum,
                    std::uint32_t in_ch, std::uint32_t out_ch) {
  const auto& k = kern::active();
  for (std::uint32_t c = 0; c < in_ch; ++c) k.axpy(out_ch, f[c], w.row(n, c), psum);
}

// Deterministic aggregation used by both flows: rows arrive weight-major,
// output-major. Max mode tracks which outputs have been touched so the
// first contribution assigns instead of comparing against zero.
struct Accumulator {
  FeatureMatrix out;
  std::vector<bool> touched;
  AggMode mode;
  std::uint32_t oc;

  Accumulator(std::size_t out_size, std::uint32_t out_ch, AggMode m)
      : out(out_size, out_ch, 0.0f), touched(out_size, false), mode(m), oc(out_ch) {}

  void add(std::uint32_t q, const float* psum) {
    float* dst = out.row(q);
    if (mode == AggMode::kSum) {
      const auto& k = kern::active();
      k.axpy(oc, 1.0f, psum, dst);
    } else if (!touched[q]) {
      std::copy_n(psum, oc, dst);
    } else {
      kern::active().max_inplace(oc, psum, dst);
    }
    touched[q] = true;
  }
};

}  // namespace

ConvResult conv_gather_scatter(const FeatureMatrix& input, const MapSet& maps,
                               const WeightStack& weights, AggMode agg, std::size_t out_size,
                               const ExecParams& params) {
  check_maps(maps, input, weights, out_size);
  const std::uint32_t ic = weights.in_ch(), oc = weights.out_ch();

  ConvResult r{FeatureMatrix(), PerfCounters{}};
  Accumulator acc(out_size, oc, agg);
  PerfCounters& pc = r.counters;

  std::vector<float> psum(oc);
  std::size_t i = 0;
  std::uint64_t real_maps = 0;
  while (i < maps.tuples.size()) {
    const std::uint32_t n = maps.tuples[i].weight_idx;
    // Gather the rows for weight n, then transform, then scatter.
    std::size_t group_end = i;
    while (group_end < maps.tuples.size() && maps.tuples[group_end].weight_idx == n) ++group_end;

    std::uint64_t rows = 0;
    for (std::size_t t = i; t < group_end; ++t) {
      const MapTuple& m = maps.tuples[t];
      if (m.padded) continue;
      ++rows;
      std::fill(psum.begin(), psum.end(), 0.0f);
      mac_row(input.row(m.input_idx), weights, n, psum.data(), ic, oc);
      acc.add(m.output_idx, psum.data());
    }
    real_maps += rows;
    // MatMul on the gathered (rows x ic) matrix.
    if (rows) pc.mxu_cycles += mxu_cycles(rows, ic, oc, params.mxu_rows, params.mxu_cols);
    i = group_end;
  }

  pc.macs = real_maps * ic * oc;
  // Input features cross DRAM three times in this flow: read for gather,
  // write of the gathered matrix, read for MatMul.
  pc.dram.input_features = 3 * real_maps * ic * kF;
  pc.dram.weights = weights.bytes();
  pc.dram.outputs = real_maps * oc * kF;  // scattered partial sums
  pc.dram_cycles = params.dram.cycles_for(pc.dram.total());

  pc.input_buf.reads = real_maps * ic;
  pc.output_buf.writes = real_maps * oc;
  pc.weight_buf.reads = static_cast<std::uint64_t>(weights.num_weights()) * ic * oc;

  r.features = std::move(acc.out);
  return r;
}

ConvResult conv_fetch_on_demand(const FeatureMatrix& input, const MapSet& maps,
                                const WeightStack& weights, AggMode agg, std::size_t out_size,
                                FeatureCache* cache, const ExecParams& params) {
  check_maps(maps, input, weights, out_size);
  const std::uint32_t ic = weights.in_ch(), oc = weights.out_ch();

  ConvResult r{FeatureMatrix(), PerfCounters{}};
  Accumulator acc(out_size, oc, agg);
  PerfCounters& pc = r.counters;

  // The systolic array covers mxu_cols output channels at a time; wider
  // layers revisit the same input row once per column tile, which is what
  // makes the cache hit rate grow with out_channels.
  const std::uint32_t oc_passes = static_cast<std::uint32_t>(ceil_div(oc, params.mxu_cols));

  std::vector<float> psum(oc);
  std::uint64_t real_maps = 0;
  for (const MapTuple& m : maps.tuples) {
    if (m.padded) continue;
    ++real_maps;
    if (cache) {
      for (std::uint32_t pass = 0; pass < oc_passes; ++pass) {
        for (std::uint32_t ch = 0; ch < ic; ch += cache->channel_tile())
          cache->access(m.input_idx, ch, pc);
      }
    } else {
      // No cache: one DRAM fetch per mapped row, then the row stays in
      // the input buffer for all column passes.
      pc.dram.input_features += ic * kF;
      pc.dram_cycles += params.dram.cycles_for(ic * kF);
      ++pc.cache_misses;
    }
    std::fill(psum.begin(), psum.end(), 0.0f);
    mac_row(input.row(m.input_idx), weights, m.weight_idx, psum.data(), ic, oc);
    acc.add(m.output_idx, psum.data());
    pc.input_buf.reads += ic;
    pc.output_buf.reads += oc;  // read-modify-write of the resident psums
    pc.output_buf.writes += oc;
  }

  pc.macs = real_maps * ic * oc;
  pc.dram.weights = weights.bytes();
  // Output-stationary: results leave the chip exactly once.
  pc.dram.outputs = static_cast<std::uint64_t>(out_size) * oc * kF;
  pc.dram_cycles += params.dram.cycles_for(pc.dram.weights + pc.dram.outputs);
  pc.weight_buf.reads = static_cast<std::uint64_t>(weights.num_weights()) * ic * oc;
  // Streamed matrix-vector products, one mapped row after another.
  pc.mxu_cycles += mxu_cycles(real_maps, ic, oc, params.mxu_rows, params.mxu_cols);

  r.features = std::move(acc.out);
  return r;
}

FeatureMatrix dense_fc(const FeatureMatrix& input, const WeightStack& weights, const float* bias) {
  if (weights.num_weights() != 1) throw std::invalid_argument("dense_fc: expected a single weight matrix");
  if (weights.in_ch() != input.cols()) throw std::invalid_argument("dense_fc: channel mismatch");

  const std::uint32_t ic = weights.in_ch(), oc = weights.out_ch();
  FeatureMatrix out(input.rows(), oc, 0.0f);
  const auto& k = kern::active();
  for (std::size_t r = 0; r < input.rows(); ++r) {
    float* dst = out.row(r);
    mac_row(input.row(r), weights, 0, dst, ic, oc);
    if (bias) k.axpy(oc, 1.0f, bias, dst);
  }
  return out;
}

FeatureMatrix aggregate(const FeatureMatrix& psums, const std::vector<std::uint32_t>& group_of_row,
                        const std::vector<bool>& padded, std::size_t out_size, AggMode mode) {
  if (psums.rows() != group_of_row.size())
    throw std::invalid_argument("aggregate: psum rows and group list disagree");
  Accumulator acc(out_size, static_cast<std::uint32_t>(psums.cols()), mode);
  for (std::size_t r = 0; r < psums.rows(); ++r) {
    if (!padded.empty() && padded[r]) continue;
    acc.add(group_of_row[r], psums.row(r));
  }
  return std::move(acc.out);
}

}  // namespace pointsim
