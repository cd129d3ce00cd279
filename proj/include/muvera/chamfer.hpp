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

// Exact Chamfer (MaxSim) similarity and the brute-force nearest neighbor
// search that every approximate path is checked against.

#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/multivector.hpp"
#include "muvera/parallel.hpp"

namespace muvera {

namespace detail {

inline void check_pair(const MultiVector& q, const MultiVector& p) {
  if (q.empty() || p.empty()) {
    throw std::invalid_argument("chamfer: empty multi-vector");
  }
  if (q.dim() != p.dim()) {
    throw std::invalid_argument("chamfer: dimension mismatch (" +
                                std::to_string(q.dim()) + " vs " +
                                std::to_string(p.dim()) + ")");
  }
}

}  // namespace detail

/// Sum over query rows of the maximum inner product against any row of `p`.
/// Not symmetric in its arguments.
inline double chamfer(const MultiVector& q, const MultiVector& p) {
  detail::check_pair(q, p);
  double total = 0.0;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.rows(); ++j) {
      best = std::max(best, dot(q.row(i), p.row(j)));
    }
    total += best;
  }
  return total;
}

/// Chamfer divided by |Q|; lies in [-1, 1] for unit-norm inputs.
inline double nchamfer(const MultiVector& q, const MultiVector& p) {
  return chamfer(q, p) / static_cast<double>(q.rows());
}

/// Exact top-k documents by Chamfer score. Doc ids are corpus positions.
inline std::vector<ScoredDoc> brute_force_topk(
    const MultiVector& q, std::span<const MultiVector> corpus, std::size_t k,
    std::size_t threads = 1) {
  if (corpus.empty()) throw std::invalid_argument("brute_force_topk: empty corpus");
  if (k == 0) throw std::invalid_argument("brute_force_topk: k must be >= 1");
  std::vector<double> scores(corpus.size());
  parallel_for(corpus.size(), threads,
               [&](std::size_t i) { scores[i] = chamfer(q, corpus[i]); });
  return top_k(std::span<const double>(scores), k);
}

}  // namespace muvera
