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

// Two-stage retrieval: over-retrieve candidates by FDE inner product, then
// rerank them by exact Chamfer against the raw corpus.

#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "muvera/chamfer.hpp"
#include "muvera/common.hpp"
#include "muvera/fde.hpp"
#include "muvera/index.hpp"
#include "muvera/multivector.hpp"

namespace muvera {

inline constexpr double kDefaultCarveTau = 0.7;

struct CarvedQuery {
  MultiVector vectors;                    // one summed vector per cluster
  std::vector<std::uint32_t> assignment;  // token -> cluster

  std::size_t num_clusters() const { return vectors.rows(); }
};

/// Greedy ball carving: take the lowest-index unclustered token q, absorb
/// every remaining q' with <q, q'> >= tau, emit the sum, repeat.
inline CarvedQuery ball_carve(const MultiVector& q, double tau) {
  if (q.empty()) throw std::invalid_argument("ball_carve: empty query");
  const std::size_t n = q.rows();
  const std::size_t dim = q.dim();
  constexpr std::uint32_t kUnassigned = ~0u;
  std::vector<std::uint32_t> assignment(n, kUnassigned);
  std::vector<double> sums;
  std::uint32_t clusters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (assignment[i] != kUnassigned) continue;
    assignment[i] = clusters;
    std::vector<double> acc(q.row(i).begin(), q.row(i).end());
    for (std::size_t j = i + 1; j < n; ++j) {
      if (assignment[j] != kUnassigned) continue;
      if (dot(q.row(i), q.row(j)) >= tau) {
        assignment[j] = clusters;
        for (std::size_t t = 0; t < dim; ++t) acc[t] += q.row(j)[t];
      }
    }
    sums.insert(sums.end(), acc.begin(), acc.end());
    ++clusters;
  }
  std::vector<float> data(sums.begin(), sums.end());
  return CarvedQuery{MultiVector(dim, std::move(data)), std::move(assignment)};
}

struct QueryOptions {
  std::size_t k_candidates = 100;
  std::size_t final_k = 10;
  std::optional<double> carve_tau;
  const MipsBackend* backend = nullptr;
};

struct StageTimings {
  std::chrono::nanoseconds fde_gen{0};
  std::chrono::nanoseconds mips{0};
  std::chrono::nanoseconds rerank{0};
};

struct RetrievalResult {
  std::vector<ScoredDoc> hits;  // ids are corpus positions
  std::size_t candidates = 0;
  std::size_t rerank_vectors = 0;  // query vectors used in rerank
  StageTimings timings;
};

/// Runs the pipeline for one query. `corpus` must be the corpus the index
/// was built from, in the same order.
inline RetrievalResult query(const FdeIndex& index,
                             std::span<const MultiVector> corpus,
                             const MultiVector& q, const QueryOptions& opts) {
  if (corpus.size() != index.size()) {
    throw std::invalid_argument("query: corpus does not match the index");
  }
  if (opts.final_k == 0 || opts.final_k > opts.k_candidates) {
    throw std::invalid_argument("query: need 1 <= final_k <= k_candidates");
  }
  using Clock = std::chrono::steady_clock;
  RetrievalResult result;

  auto t0 = Clock::now();
  const Fde qf = index.encoder().encode_query(q);
  auto t1 = Clock::now();
  const std::vector<ScoredDoc> candidates =
      mips_search(index, qf, opts.k_candidates, opts.backend);
  auto t2 = Clock::now();

  std::optional<CarvedQuery> carved;
  if (opts.carve_tau) carved = ball_carve(q, *opts.carve_tau);
  const MultiVector& rerank_q = carved ? carved->vectors : q;
  std::vector<ScoredDoc> rescored;
  rescored.reserve(candidates.size());
  for (const ScoredDoc& c : candidates) {
    rescored.push_back({c.id, chamfer(rerank_q, corpus[c.id])});
  }
  result.hits = top_k(std::move(rescored), opts.final_k);
  auto t3 = Clock::now();

  result.candidates = candidates.size();
  result.rerank_vectors = rerank_q.rows();
  result.timings = {t1 - t0, t2 - t1, t3 - t2};
  return result;
}

}  // namespace muvera
