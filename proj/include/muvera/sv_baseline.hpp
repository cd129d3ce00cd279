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

// Single-vector heuristic baseline: every query token retrieves its nearest
// document tokens, and the owning documents are interleaved rank-major.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/multivector.hpp"

namespace muvera {

/// All corpus tokens flattened, with the owning corpus position per token.
class TokenIndex {
 public:
  static TokenIndex build(std::span<const MultiVector> corpus) {
    if (corpus.empty()) throw std::invalid_argument("TokenIndex: empty corpus");
    TokenIndex t;
    t.dim_ = corpus.front().dim();
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      if (corpus[d].dim() != t.dim_) {
        throw std::invalid_argument("TokenIndex: mixed embedding dimensions");
      }
      t.tokens_.insert(t.tokens_.end(), corpus[d].data().begin(),
                       corpus[d].data().end());
      t.owners_.insert(t.owners_.end(), corpus[d].rows(), static_cast<DocId>(d));
    }
    return t;
  }

  std::size_t size() const { return owners_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const float> token(std::size_t i) const {
    return {tokens_.data() + i * dim_, dim_};
  }
  const std::vector<DocId>& owners() const { return owners_; }

 private:
  std::size_t dim_ = 0;
  std::vector<float> tokens_;
  std::vector<DocId> owners_;
};

struct SvScanStats {
  std::uint64_t floats_scanned = 0;
};

/// Rank-major interleave of owning doc ids: all rank-1 hits for query
/// tokens 1..|Q|, then rank-2 hits, and so on. With `dedup`, only the
/// first occurrence of each doc id is kept.
inline std::vector<DocId> sv_candidates(const MultiVector& q,
                                        const TokenIndex& tokens,
                                        std::size_t k_per_query, bool dedup,
                                        SvScanStats* stats = nullptr) {
  if (k_per_query == 0) {
    throw std::invalid_argument("sv_candidates: k_per_query must be >= 1");
  }
  if (q.dim() != tokens.dim()) {
    throw std::invalid_argument("sv_candidates: dimension mismatch");
  }
  const std::size_t k = std::min(k_per_query, tokens.size());
  std::vector<std::vector<ScoredDoc>> per_query(q.rows());
  std::vector<double> scores(tokens.size());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      scores[t] = dot(q.row(i), tokens.token(t));
    }
    per_query[i] = top_k(std::span<const double>(scores), k);
  }
  if (stats != nullptr) {
    stats->floats_scanned += static_cast<std::uint64_t>(q.rows()) *
                             tokens.size() * tokens.dim();
  }

  std::vector<DocId> out;
  out.reserve(q.rows() * k);
  std::unordered_set<DocId> seen;
  for (std::size_t rank = 0; rank < k; ++rank) {
    for (std::size_t i = 0; i < q.rows(); ++i) {
      const DocId doc = tokens.owners()[per_query[i][rank].id];
      if (dedup && !seen.insert(doc).second) continue;
      out.push_back(doc);
    }
  }
  return out;
}

}  // namespace muvera
