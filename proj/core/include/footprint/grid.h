/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOOTPRINT_GRID_H_
#define FOOTPRINT_GRID_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "footprint/error.h"

namespace footprint {

// Row-major dense raster. Used for label grids, score maps and masks.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, const T& fill = T{})
      : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative grid dimensions");
    }
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int row, int col) { return data_[Index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[Index(row, col)]; }

  T& at_flat(std::size_t i) { return data_[i]; }
  const T& at_flat(std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  template <typename U>
  bool SameShape(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t Index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(col);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// Grid cell address. Row-major order is the canonical tie-break everywhere.
struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

// {0,1} label raster.
using BinaryMap = Grid<std::uint8_t>;

// Dense prediction scores; consumers clamp into [1e-7, 1 - 1e-7].
using ScoreMap = Grid<double>;

// Image-plane unit direction (du, dv).
struct Direction2 {
  double du = 0.0;
  double dv = 0.0;
  bool operator==(const Direction2&) const = default;
};

// Absent cells carry no direction.
using DirectionMap = Grid<std::optional<Direction2>>;

template <typename T, typename U>
void RequireSameShape(const Grid<T>& a, const Grid<U>& b, const char* what) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
}

}  // namespace footprint

#endif  // FOOTPRINT_GRID_H_
