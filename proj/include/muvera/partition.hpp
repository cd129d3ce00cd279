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

// Space partitions used to bucket token embeddings: SimHash (random
// hyperplanes, B = 2^k_sim) and nearest-center k-means.

#pragma once

#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/kmeans.hpp"

namespace muvera {

struct ClusterId {
  std::uint32_t value = 0;

  friend auto operator<=>(const ClusterId&, const ClusterId&) = default;
};

inline constexpr std::uint32_t kMaxSimHashBits = 24;

/// Number of disagreeing bits between two SimHash cluster ids.
inline std::uint32_t hamming(ClusterId a, ClusterId b) {
  return static_cast<std::uint32_t>(std::popcount(a.value ^ b.value));
}

class SimHashPartitioner {
 public:
  /// Draws k_sim Gaussian hyperplanes keyed by (seed, rep).
  static SimHashPartitioner create(std::uint32_t k_sim, std::size_t dim,
                                   std::uint64_t seed, std::uint64_t rep) {
    check_args(k_sim, dim);
    std::mt19937_64 rng(derive_key(seed, rep, Purpose::kHyperplanes));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> g(static_cast<std::size_t>(k_sim) * dim);
    for (double& v : g) v = normal(rng);
    return SimHashPartitioner(k_sim, dim, std::move(g));
  }

  /// Uses caller-supplied hyperplanes (k_sim rows of length dim).
  static SimHashPartitioner from_hyperplanes(std::uint32_t k_sim,
                                             std::size_t dim,
                                             std::vector<double> gaussians) {
    check_args(k_sim, dim);
    if (gaussians.size() != static_cast<std::size_t>(k_sim) * dim) {
      throw std::invalid_argument("SimHash: expected " +
                                  std::to_string(k_sim * dim) +
                                  " hyperplane entries, got " +
                                  std::to_string(gaussians.size()));
    }
    return SimHashPartitioner(k_sim, dim, std::move(gaussians));
  }

  std::uint32_t k_sim() const { return k_sim_; }
  std::size_t dim() const { return dim_; }
  std::uint32_t num_clusters() const { return 1u << k_sim_; }
  std::span<const double> hyperplane(std::size_t i) const {
    return {gaussians_.data() + i * dim_, dim_};
  }
  std::span<const double> gaussians() const { return gaussians_; }

  /// Bit i-1 is set iff <g_i, x> > 0 (LSB-first).
  template <typename T>
  ClusterId assign(std::span<const T> x) const {
    check_dim(x.size());
    std::uint32_t index = 0;
    for (std::uint32_t i = 0; i < k_sim_; ++i) {
      if (dot(hyperplane(i), x) > 0.0) index |= 1u << i;
    }
    return ClusterId{index};
  }

  friend bool operator==(const SimHashPartitioner&,
                         const SimHashPartitioner&) = default;

 private:
  SimHashPartitioner(std::uint32_t k_sim, std::size_t dim,
                     std::vector<double> g)
      : k_sim_(k_sim), dim_(dim), gaussians_(std::move(g)) {}

  static void check_args(std::uint32_t k_sim, std::size_t dim) {
    if (k_sim < 1 || k_sim > kMaxSimHashBits) {
      throw std::invalid_argument("SimHash: k_sim must be in [1, 24], got " +
                                  std::to_string(k_sim));
    }
    if (dim == 0) throw std::invalid_argument("SimHash: dim must be >= 1");
  }

  void check_dim(std::size_t n) const {
    if (n != dim_) {
      throw std::invalid_argument("SimHash: input dimension " +
                                  std::to_string(n) + " != " +
                                  std::to_string(dim_));
    }
  }

  std::uint32_t k_sim_;
  std::size_t dim_;
  std::vector<double> gaussians_;
};

class KMeansPartitioner {
 public:
  KMeansPartitioner(std::size_t dim, std::vector<float> centers)
      : dim_(dim), centers_(std::move(centers)) {
    if (dim_ == 0 || centers_.empty() || centers_.size() % dim_ != 0) {
      throw std::invalid_argument("KMeansPartitioner: bad center matrix");
    }
    for (float c : centers_) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("KMeansPartitioner: non-finite center");
      }
    }
  }

  std::size_t dim() const { return dim_; }
  std::uint32_t num_clusters() const {
    return static_cast<std::uint32_t>(centers_.size() / dim_);
  }
  std::span<const float> center(std::size_t c) const {
    return {centers_.data() + c * dim_, dim_};
  }
  std::span<const float> centers() const { return centers_; }

  /// Nearest center by Euclidean distance, ties to the lowest index.
  template <typename T>
  ClusterId assign(std::span<const T> x) const {
    if (x.size() != dim_) {
      throw std::invalid_argument("KMeansPartitioner: input dimension " +
                                  std::to_string(x.size()) + " != " +
                                  std::to_string(dim_));
    }
    return ClusterId{static_cast<std::uint32_t>(detail::nearest_center(
        x, std::span<const float>(centers_), num_clusters(), dim_))};
  }

  friend bool operator==(const KMeansPartitioner&,
                         const KMeansPartitioner&) = default;

 private:
  std::size_t dim_;
  std::vector<float> centers_;
};

/// Trains a k-means partitioner over `n` points (rows of `points`). When the
/// points hold fewer than `num_centers` distinct values, the effective
/// number of clusters is reduced; read it back via num_clusters().
inline KMeansPartitioner kmeans_train(std::span<const float> points,
                                      std::size_t n, std::size_t dim,
                                      std::size_t num_centers,
                                      std::uint64_t seed,
                                      const KMeansOptions& opts = {}) {
  if (n == 0) throw std::invalid_argument("kmeans_train: no points");
  if (num_centers == 0) {
    throw std::invalid_argument("kmeans_train: B must be >= 1");
  }
  KMeansResult r = lloyd_kmeans(points, n, dim, num_centers, seed, opts);
  return KMeansPartitioner(dim, std::move(r.centers));
}

using Partitioner = std::variant<SimHashPartitioner, KMeansPartitioner>;

template <typename T>
inline ClusterId assign(const Partitioner& p, std::span<const T> x) {
  return std::visit([&](const auto& part) { return part.assign(x); }, p);
}

inline std::uint32_t num_clusters(const Partitioner& p) {
  return std::visit([](const auto& part) { return part.num_clusters(); }, p);
}

}  // namespace muvera
