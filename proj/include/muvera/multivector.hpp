// Copyright 2026 The muvera-cpp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muvera/common.hpp"

namespace muvera {

/// A set of token embeddings: `rows()` vectors of dimension `dim()`, stored
/// row-major in single precision.
class MultiVector {
 public:
  MultiVector() = default;

  MultiVector(std::size_t rows, std::size_t dim)
      : dim_(dim), data_(rows * dim, 0.0f) {
    check_shape(rows, dim);
  }

  MultiVector(std::size_t dim, std::vector<float> data)
      : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0) throw std::invalid_argument("MultiVector: dim must be >= 1");
    if (data_.size() % dim_ != 0) {
      throw std::invalid_argument("MultiVector: data size " +
                                  std::to_string(data_.size()) +
                                  " is not a multiple of dim " +
                                  std::to_string(dim_));
    }
    check_shape(data_.size() / dim_, dim_);
  }

  static MultiVector from_rows(
      std::initializer_list<std::initializer_list<float>> rows) {
    if (rows.size() == 0) {
      throw std::invalid_argument("MultiVector: at least one row required");
    }
    const std::size_t dim = rows.begin()->size();
    std::vector<float> data;
    data.reserve(rows.size() * dim);
    for (const auto& r : rows) {
      if (r.size() != dim) {
        throw std::invalid_argument("MultiVector: ragged rows");
      }
      data.insert(data.end(), r.begin(), r.end());
    }
    return MultiVector(dim, std::move(data));
  }

  std::size_t rows() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<float> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  // Divides each row by its Euclidean norm. Zero rows are left unchanged.
  void normalize() {
    for (std::size_t i = 0; i < rows(); ++i) {
      auto r = row(i);
      const double n = norm(std::span<const float>(r));
      if (n == 0.0) continue;
      for (float& v : r) v = static_cast<float>(v / n);
    }
  }

  bool is_normalized(double tol = 1e-4) const {
    for (std::size_t i = 0; i < rows(); ++i) {
      if (std::abs(norm(row(i)) - 1.0) > tol) return false;
    }
    return true;
  }

  friend bool operator==(const MultiVector&, const MultiVector&) = default;

 private:
  static void check_shape(std::size_t rows, std::size_t dim) {
    if (rows == 0) {
      throw std::invalid_argument("MultiVector: at least one row required");
    }
    if (dim == 0) throw std::invalid_argument("MultiVector: dim must be >= 1");
  }

  std::size_t dim_ = 0;
  std::vector<float> data_;
};

}  // namespace muvera
