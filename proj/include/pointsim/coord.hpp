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

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "pointsim/common.hpp"

namespace pointsim {

// Integer voxel coordinate with 2 or 3 axes. Axis values must stay below
// 2^30 in magnitude so that sums/differences never overflow int32 and
// squared distances fit in uint64.
class Coord {
 public:
  Coord() = default;
  Coord(std::int32_t x, std::int32_t y) : v_{x, y, 0}, dim_(2) {}
  Coord(std::int32_t x, std::int32_t y, std::int32_t z) : v_{x, y, z}, dim_(3) {}

  static Coord zero(int dim) {
    assert(dim == 2 || dim == 3);
    Coord c;
    c.dim_ = static_cast<std::int8_t>(dim);
    return c;
  }

  int dim() const { return dim_; }
  std::int32_t operator[](int axis) const { return v_[static_cast<std::size_t>(axis)]; }
  std::int32_t& operator[](int axis) { return v_[static_cast<std::size_t>(axis)]; }

  Coord operator+(const Coord& o) const {
    assert(dim_ == o.dim_);
    Coord r = *this;
    for (int a = 0; a < dim_; ++a) r.v_[static_cast<std::size_t>(a)] += o[a];
    return r;
  }
  Coord operator-(const Coord& o) const {
    assert(dim_ == o.dim_);
    Coord r = *this;
    for (int a = 0; a < dim_; ++a) r.v_[static_cast<std::size_t>(a)] -= o[a];
    return r;
  }
  Coord operator-() const {
    Coord r = *this;
    for (int a = 0; a < dim_; ++a) r.v_[static_cast<std::size_t>(a)] = -r.v_[static_cast<std::size_t>(a)];
    return r;
  }

  bool operator==(const Coord& o) const { return dim_ == o.dim_ && v_ == o.v_; }
  bool operator!=(const Coord& o) const { return !(*this == o); }

  std::string str() const {
    std::string s = "(";
    for (int a = 0; a < dim_; ++a) {
      if (a) s += ",";
      s += std::to_string(v_[static_cast<std::size_t>(a)]);
    }
    return s + ")";
  }

 private:
  std::array<std::int32_t, 3> v_{0, 0, 0};
  std::int8_t dim_ = 3;
};

// Lexicographic order, axis 0 most significant. Total, antisymmetric,
// transitive; the order every sorted structure in the library uses.
inline int canonical_compare(const Coord& a, const Coord& b) {
  assert(a.dim() == b.dim() && "coordinate dimensionality mismatch");
  for (int axis = 0; axis < a.dim(); ++axis) {
    if (a[axis] < b[axis]) return -1;
    if (a[axis] > b[axis]) return 1;
  }
  return 0;
}

inline bool coord_less(const Coord& a, const Coord& b) { return canonical_compare(a, b) < 0; }

// Exact squared Euclidean distance. Fits uint64 for |axis| < 2^30.
inline std::uint64_t squared_distance(const Coord& a, const Coord& b) {
  assert(a.dim() == b.dim());
  std::uint64_t d = 0;
  for (int axis = 0; axis < a.dim(); ++axis) {
    std::int64_t diff = static_cast<std::int64_t>(a[axis]) - b[axis];
    d += static_cast<std::uint64_t>(diff * diff);
  }
  return d;
}

struct CoordHash {
  std::size_t operator()(const Coord& c) const {
    // FNV-1a over the axes.
    std::uint64_t h = 1469598103934665603ull;
    for (int a = 0; a < c.dim(); ++a) {
      h ^= static_cast<std::uint32_t>(c[a]);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace pointsim
