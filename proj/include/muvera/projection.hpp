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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "muvera/common.hpp"

namespace muvera {

/// A rows x cols matrix of uniform +-1 entries, scaled by 1/sqrt(rows) when
/// applied. Entries are derived from a key by counter hashing, so large
/// matrices are never materialized: column c owns ceil(rows/64) words and
/// entry (r, c) is bit r%64 of word r/64.
class SignProjection {
 public:
  SignProjection(std::size_t rows, std::size_t cols, std::uint64_t key)
      : rows_(rows), cols_(cols), key_(key), words_((rows + 63) / 64) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("SignProjection: empty shape");
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double scale() const { return 1.0 / std::sqrt(static_cast<double>(rows_)); }

  int entry(std::size_t r, std::size_t c) const {
    return (word(c, r / 64) >> (r % 64)) & 1u ? 1 : -1;
  }

  /// out = scale * S * x. Zero coordinates of x are skipped.
  template <typename T>
  void apply(std::span<const T> x, std::span<double> out) const {
    if (x.size() != cols_ || out.size() != rows_) {
      throw std::invalid_argument("SignProjection: shape mismatch");
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t c = 0; c < cols_; ++c) {
      const double v = static_cast<double>(x[c]);
      if (v == 0.0) continue;
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = word(c, w);
        const std::size_t base = w * 64;
        const std::size_t lim = std::min<std::size_t>(64, rows_ - base);
        for (std::size_t b = 0; b < lim; ++b) {
          out[base + b] += (bits & 1u) ? v : -v;
          bits >>= 1;
        }
      }
    }
    const double s = scale();
    for (double& o : out) o *= s;
  }

  template <typename T>
  std::vector<double> apply(std::span<const T> x) const {
    std::vector<double> out(rows_);
    apply(x, std::span<double>(out));
    return out;
  }

 private:
  std::uint64_t word(std::size_t c, std::size_t w) const {
    return mix64(key_ ^ mix64(static_cast<std::uint64_t>(c * words_ + w)));
  }

  std::size_t rows_;
  std::size_t cols_;
  std::uint64_t key_;
  std::size_t words_;
};

}  // namespace muvera
