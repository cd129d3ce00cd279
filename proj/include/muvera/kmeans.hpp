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

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "muvera/common.hpp"

namespace muvera {

struct KMeansOptions {
  std::size_t max_iters = 100;
  // Stop when the relative decrease of the mean squared distance drops below.
  double tol = 1e-4;
};

struct KMeansResult {
  std::size_t dim = 0;
  std::size_t k = 0;  // effective number of centers
  std::vector<float> centers;  // k x dim
  std::vector<double> mse_history;  // one entry per assignment step
  std::size_t iterations = 0;

  std::span<const float> center(std::size_t c) const {
    return {centers.data() + c * dim, dim};
  }
};

namespace detail {

// Index of nearest center, ties to the lowest index.
template <typename T>
inline std::size_t nearest_center(std::span<const T> x,
                                  std::span<const float> centers,
                                  std::size_t k, std::size_t dim,
                                  double* best_dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d =
        squared_distance(x, centers.subspan(c * dim, dim));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_dist != nullptr) *best_dist = best_d;
  return best;
}

// Positions of the first occurrence of every distinct row (by value, so
// -0.0f and 0.0f compare equal).
inline std::vector<std::size_t> distinct_rows(std::span<const float> data,
                                              std::size_t n, std::size_t dim) {
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> out;
  std::string key(dim * sizeof(float), '\0');
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const float v = data[i * dim + j] + 0.0f;
      std::memcpy(key.data() + j * sizeof(float), &v, sizeof(float));
    }
    if (seen.insert(key).second) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Lloyd's algorithm over `n` rows of `data`. Centers start at a seeded
/// sample of distinct rows; if fewer than `k` distinct rows exist, the
/// effective k shrinks to that count. Empty clusters keep their center.
inline KMeansResult lloyd_kmeans(std::span<const float> data, std::size_t n,
                                 std::size_t dim, std::size_t k,
                                 std::uint64_t seed,
                                 const KMeansOptions& opts = {}) {
  if (n == 0 || dim == 0) throw std::invalid_argument("kmeans: empty input");
  if (k == 0) throw std::invalid_argument("kmeans: k must be >= 1");
  if (data.size() < n * dim) throw std::invalid_argument("kmeans: short data");

  std::vector<std::size_t> distinct = detail::distinct_rows(data, n, dim);
  std::mt19937_64 rng(seed);
  std::shuffle(distinct.begin(), distinct.end(), rng);

  KMeansResult out;
  out.dim = dim;
  out.k = std::min(k, distinct.size());
  out.centers.resize(out.k * dim);
  for (std::size_t c = 0; c < out.k; ++c) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(distinct[c] * dim),
                dim, out.centers.begin() + static_cast<std::ptrdiff_t>(c * dim));
  }

  std::vector<std::size_t> assignment(n);
  std::vector<double> sums(out.k * dim);
  std::vector<std::size_t> counts(out.k);
  double prev_mse = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.0;
      assignment[i] = detail::nearest_center(data.subspan(i * dim, dim),
                                             std::span<const float>(out.centers),
                                             out.k, dim, &d);
      total += d;
    }
    const double mse = total / static_cast<double>(n);
    out.mse_history.push_back(mse);
    out.iterations = iter + 1;
    if (mse == 0.0) break;
    if (prev_mse < std::numeric_limits<double>::infinity() &&
        (prev_mse - mse) / prev_mse < opts.tol) {
      break;
    }
    prev_mse = mse;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = assignment[i];
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) {
        sums[c * dim + j] += data[i * dim + j];
      }
    }
    for (std::size_t c = 0; c < out.k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        out.centers[c * dim + j] =
            static_cast<float>(sums[c * dim + j] / static_cast<double>(counts[c]));
      }
    }
  }
  return out;
}

}  // namespace muvera
