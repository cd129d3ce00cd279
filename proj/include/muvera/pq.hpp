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

// Product quantization PQ-C-G: every consecutive group of G coordinates is
// replaced by the index of one of C k-means centers, so with C <= 256 a
// group costs one byte. Queries stay uncompressed (asymmetric querying).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/kmeans.hpp"
#include "muvera/parallel.hpp"

namespace muvera {

struct PqSpec {
  std::uint32_t centers = 256;     // C
  std::uint32_t group_width = 8;   // G
  std::uint64_t seed = 1;
  std::size_t sample_limit = 100000;
  KMeansOptions lloyd;

  friend bool operator==(const PqSpec& a, const PqSpec& b) {
    return a.centers == b.centers && a.group_width == b.group_width &&
           a.seed == b.seed && a.sample_limit == b.sample_limit;
  }
};

using PqCodes = std::vector<std::uint8_t>;

/// Per-query table of partial dot products, num_groups x C.
class PqDotTable {
 public:
  PqDotTable(std::size_t num_groups, std::size_t stride)
      : stride_(stride), values_(num_groups * stride, 0.0) {}

  double at(std::size_t group, std::size_t code) const {
    return values_[group * stride_ + code];
  }
  double& at(std::size_t group, std::size_t code) {
    return values_[group * stride_ + code];
  }

  double score(std::span<const std::uint8_t> codes) const {
    double acc = 0.0;
    const double* row = values_.data();
    for (std::uint8_t c : codes) {
      acc += row[c];
      row += stride_;
    }
    return acc;
  }

 private:
  std::size_t stride_;
  std::vector<double> values_;
};

class PqCodebook {
 public:
  /// `centers[g]` holds centers_per_group[g] x group_width values.
  PqCodebook(std::size_t dim, std::uint32_t group_width,
             std::vector<std::vector<float>> centers)
      : dim_(dim), group_width_(group_width), centers_(std::move(centers)) {
    if (group_width_ == 0 || dim_ % group_width_ != 0) {
      throw std::invalid_argument("PqCodebook: dim " + std::to_string(dim_) +
                                  " is not divisible by G=" +
                                  std::to_string(group_width_));
    }
    if (centers_.size() != dim_ / group_width_) {
      throw std::invalid_argument("PqCodebook: wrong number of groups");
    }
    for (const auto& g : centers_) {
      const std::size_t c = g.size() / group_width_;
      if (g.empty() || g.size() % group_width_ != 0 || c > 256) {
        throw std::invalid_argument("PqCodebook: bad group center matrix");
      }
      for (float v : g) {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("PqCodebook: non-finite center");
        }
      }
      max_centers_ = std::max(max_centers_, c);
    }
  }

  std::size_t dim() const { return dim_; }
  std::uint32_t group_width() const { return group_width_; }
  std::size_t num_groups() const { return centers_.size(); }
  std::size_t code_bytes() const { return num_groups(); }
  std::size_t centers_in_group(std::size_t g) const {
    return centers_[g].size() / group_width_;
  }
  std::span<const float> center(std::size_t g, std::size_t c) const {
    return {centers_[g].data() + c * group_width_, group_width_};
  }
  const std::vector<std::vector<float>>& groups() const { return centers_; }

  template <typename T>
  PqCodes encode(std::span<const T> v) const {
    check_dim(v.size());
    PqCodes codes(num_groups());
    for (std::size_t g = 0; g < num_groups(); ++g) {
      codes[g] = static_cast<std::uint8_t>(detail::nearest_center(
          v.subspan(g * group_width_, group_width_),
          std::span<const float>(centers_[g]), centers_in_group(g),
          group_width_));
    }
    return codes;
  }

  std::vector<float> decode(std::span<const std::uint8_t> codes) const {
    check_codes(codes);
    std::vector<float> out(dim_);
    for (std::size_t g = 0; g < num_groups(); ++g) {
      auto c = center(g, codes[g]);
      std::copy(c.begin(), c.end(),
                out.begin() + static_cast<std::ptrdiff_t>(g * group_width_));
    }
    return out;
  }

  template <typename T>
  PqDotTable dot_table(std::span<const T> q) const {
    check_dim(q.size());
    PqDotTable table(num_groups(), max_centers_);
    for (std::size_t g = 0; g < num_groups(); ++g) {
      auto slice = q.subspan(g * group_width_, group_width_);
      for (std::size_t c = 0; c < centers_in_group(g); ++c) {
        table.at(g, c) = dot(slice, center(g, c));
      }
    }
    return table;
  }

  void check_codes(std::span<const std::uint8_t> codes) const {
    if (codes.size() != num_groups()) {
      throw std::invalid_argument("PQ: expected " +
                                  std::to_string(num_groups()) +
                                  " code bytes, got " +
                                  std::to_string(codes.size()));
    }
    for (std::size_t g = 0; g < codes.size(); ++g) {
      if (codes[g] >= centers_in_group(g)) {
        throw std::invalid_argument(
            "PQ: code " + std::to_string(codes[g]) + " in group " +
            std::to_string(g) + " exceeds the group's " +
            std::to_string(centers_in_group(g)) + " centers");
      }
    }
  }

  friend bool operator==(const PqCodebook& a, const PqCodebook& b) {
    return a.dim_ == b.dim_ && a.group_width_ == b.group_width_ &&
           a.centers_ == b.centers_;
  }

 private:
  void check_dim(std::size_t n) const {
    if (n != dim_) {
      throw std::invalid_argument("PQ: vector dimension " + std::to_string(n) +
                                  " != " + std::to_string(dim_));
    }
  }

  std::size_t dim_;
  std::uint32_t group_width_;
  std::vector<std::vector<float>> centers_;
  std::size_t max_centers_ = 0;
};

/// Trains one k-means codebook per group on a seeded sample (without
/// replacement, shared by all groups) of at most spec.sample_limit vectors.
/// Groups with fewer distinct slices than C get fewer centers.
inline PqCodebook pq_train(std::span<const float> vectors, std::size_t n,
                           std::size_t dim, const PqSpec& spec,
                           std::size_t threads = 1) {
  if (n == 0 || dim == 0) throw std::invalid_argument("pq_train: empty input");
  if (spec.centers == 0 || spec.centers > 256) {
    throw std::invalid_argument("pq_train: C must be in [1, 256], got " +
                                std::to_string(spec.centers));
  }
  if (spec.group_width == 0 || dim % spec.group_width != 0) {
    throw std::invalid_argument("pq_train: dimension " + std::to_string(dim) +
                                " is not divisible by G=" +
                                std::to_string(spec.group_width));
  }
  std::vector<std::size_t> sample(n);
  std::iota(sample.begin(), sample.end(), 0);
  if (n > spec.sample_limit) {
    std::vector<std::size_t> picked;
    std::mt19937_64 rng(derive_key(spec.seed, 0, Purpose::kPqSample));
    std::sample(sample.begin(), sample.end(), std::back_inserter(picked),
                spec.sample_limit, rng);
    sample = std::move(picked);
  }

  const std::size_t width = spec.group_width;
  const std::size_t groups = dim / width;
  std::vector<std::vector<float>> centers(groups);
  parallel_for(groups, threads, [&](std::size_t g) {
    std::vector<float> slices;
    slices.reserve(sample.size() * width);
    for (std::size_t i : sample) {
      const float* row = vectors.data() + i * dim + g * width;
      slices.insert(slices.end(), row, row + width);
    }
    KMeansResult r = lloyd_kmeans(slices, sample.size(), width, spec.centers,
                                  derive_key(spec.seed, g, Purpose::kPqGroup),
                                  spec.lloyd);
    centers[g] = std::move(r.centers);
  });
  return PqCodebook(dim, spec.group_width, std::move(centers));
}

/// sum over groups of <q_g, center(g, codes[g])>.
template <typename T>
inline double pq_asymmetric_dot(const PqCodebook& codebook,
                                std::span<const std::uint8_t> codes,
                                std::span<const T> q) {
  codebook.check_codes(codes);
  return codebook.dot_table(q).score(codes);
}

}  // namespace muvera
