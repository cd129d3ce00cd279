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
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/fde.hpp"
#include "muvera/multivector.hpp"
#include "muvera/parallel.hpp"
#include "muvera/pq.hpp"

namespace muvera {

struct BuildOptions {
  // External document ids; empty means 0..n-1.
  std::vector<DocId> ids;
  std::size_t threads = 1;
  KMeansTraining kmeans;
};

/// Immutable collection of document FDEs, stored dense (float32) or as
/// PQ codes. Documents are addressed by corpus position; ids() maps a
/// position to its external id.
class FdeIndex {
 public:
  FdeIndex(FdeEncoder encoder, std::vector<DocId> ids, std::vector<float> dense)
      : encoder_(std::move(encoder)), ids_(std::move(ids)), dense_(std::move(dense)) {
    check_ids();
    if (dense_.size() != ids_.size() * dim()) {
      throw std::invalid_argument("FdeIndex: dense payload size mismatch");
    }
  }

  FdeIndex(FdeEncoder encoder, std::vector<DocId> ids, PqSpec spec,
           PqCodebook codebook, std::vector<std::uint8_t> code_payload)
      : encoder_(std::move(encoder)),
        ids_(std::move(ids)),
        pq_spec_(spec),
        codebook_(std::move(codebook)),
        codes_(std::move(code_payload)) {
    check_ids();
    if (codebook_->dim() != dim()) {
      throw std::invalid_argument("FdeIndex: codebook dimension mismatch");
    }
    if (codes_.size() != ids_.size() * codebook_->code_bytes()) {
      throw std::invalid_argument("FdeIndex: code payload size mismatch");
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) codebook_->check_codes(codes(i));
  }

  /// Encodes every document (fill_empty per config) and optionally
  /// compresses the FDEs with PQ trained on them.
  static FdeIndex build(std::span<const MultiVector> corpus,
                        const FdeConfig& config,
                        const std::optional<PqSpec>& pq = std::nullopt,
                        const BuildOptions& opts = {}) {
    if (corpus.empty()) throw std::invalid_argument("build_index: empty corpus");
    for (const MultiVector& doc : corpus) {
      if (doc.dim() != corpus.front().dim()) {
        throw std::invalid_argument("build_index: mixed embedding dimensions");
      }
    }
    if (corpus.front().dim() != config.dim) {
      throw std::invalid_argument("build_index: corpus dimension " +
                                  std::to_string(corpus.front().dim()) +
                                  " != config dim " + std::to_string(config.dim));
    }
    FdeEncoder encoder = FdeEncoder::train(config, corpus, opts.kmeans);
    std::vector<DocId> ids = opts.ids;
    if (ids.empty()) {
      ids.resize(corpus.size());
      std::iota(ids.begin(), ids.end(), DocId{0});
    }
    if (ids.size() != corpus.size()) {
      throw std::invalid_argument("build_index: ids/corpus size mismatch");
    }
    const std::size_t dim = encoder.output_dim();
    std::vector<float> dense(corpus.size() * dim);
    parallel_for(corpus.size(), opts.threads, [&](std::size_t i) {
      const Fde f = encoder.encode_document(corpus[i]);
      std::transform(f.values.begin(), f.values.end(),
                     dense.begin() + static_cast<std::ptrdiff_t>(i * dim),
                     [](double v) { return static_cast<float>(v); });
    });
    if (!pq) return FdeIndex(std::move(encoder), std::move(ids), std::move(dense));

    PqCodebook codebook = pq_train(dense, corpus.size(), dim, *pq, opts.threads);
    std::vector<std::uint8_t> codes(corpus.size() * codebook.code_bytes());
    parallel_for(corpus.size(), opts.threads, [&](std::size_t i) {
      const PqCodes c = codebook.encode(
          std::span<const float>(dense.data() + i * dim, dim));
      std::copy(c.begin(), c.end(),
                codes.begin() + static_cast<std::ptrdiff_t>(i * c.size()));
    });
    return FdeIndex(std::move(encoder), std::move(ids), *pq,
                    std::move(codebook), std::move(codes));
  }

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return encoder_.output_dim(); }
  const FdeEncoder& encoder() const { return encoder_; }
  const FdeConfig& config() const { return encoder_.config(); }
  std::uint64_t fingerprint() const { return encoder_.fingerprint(); }
  const std::vector<DocId>& ids() const { return ids_; }
  bool compressed() const { return codebook_.has_value(); }

  std::span<const float> dense(std::size_t doc) const {
    return {dense_.data() + doc * dim(), dim()};
  }
  std::span<const float> dense_payload() const { return dense_; }
  std::span<const std::uint8_t> codes(std::size_t doc) const {
    const std::size_t b = codebook_->code_bytes();
    return {codes_.data() + doc * b, b};
  }
  std::span<const std::uint8_t> code_payload() const { return codes_; }
  const PqCodebook& codebook() const { return *codebook_; }
  const std::optional<PqSpec>& pq_spec() const { return pq_spec_; }

  /// Stored bytes per document in the FDE payload.
  std::size_t payload_bytes_per_doc() const {
    return compressed() ? codebook_->code_bytes() : dim() * sizeof(float);
  }

  /// Stored FDE of a document, decoded when compressed.
  std::vector<float> document_fde(std::size_t doc) const {
    if (compressed()) return codebook_->decode(codes(doc));
    auto d = dense(doc);
    return {d.begin(), d.end()};
  }

 private:
  void check_ids() const {
    if (ids_.empty()) throw std::invalid_argument("FdeIndex: no documents");
    std::set<DocId> unique(ids_.begin(), ids_.end());
    if (unique.size() != ids_.size()) {
      throw std::invalid_argument("FdeIndex: duplicate document ids");
    }
  }

  FdeEncoder encoder_;
  std::vector<DocId> ids_;
  std::vector<float> dense_;
  std::optional<PqSpec> pq_spec_;
  std::optional<PqCodebook> codebook_;
  std::vector<std::uint8_t> codes_;
};

/// Candidate generation over document FDEs. Implementations return the top
/// k positions by inner product with the query FDE, ties by ascending
/// position. A graph-based ANN index can be dropped in here.
class MipsBackend {
 public:
  virtual ~MipsBackend() = default;
  virtual std::vector<ScoredDoc> search(const FdeIndex& index,
                                        std::span<const double> query,
                                        std::size_t k) const = 0;
};

/// Exhaustive scan. Dense indexes skip the zero coordinates of the query;
/// PQ indexes score through a per-query dot table.
class ExactScanBackend final : public MipsBackend {
 public:
  std::vector<ScoredDoc> search(const FdeIndex& index,
                                std::span<const double> query,
                                std::size_t k) const override {
    std::vector<double> scores(index.size());
    if (index.compressed()) {
      const PqDotTable table = index.codebook().dot_table(query);
      for (std::size_t i = 0; i < index.size(); ++i) {
        scores[i] = table.score(index.codes(i));
      }
    } else {
      std::vector<std::pair<std::size_t, double>> nonzero;
      for (std::size_t j = 0; j < query.size(); ++j) {
        if (query[j] != 0.0) nonzero.emplace_back(j, query[j]);
      }
      for (std::size_t i = 0; i < index.size(); ++i) {
        const float* row = index.dense(i).data();
        double acc = 0.0;
        for (const auto& [j, v] : nonzero) acc += v * static_cast<double>(row[j]);
        scores[i] = acc;
      }
    }
    return top_k(std::span<const double>(scores), k);
  }
};

inline std::vector<ScoredDoc> mips_search(const FdeIndex& index,
                                          const Fde& query_fde,
                                          std::size_t k_candidates,
                                          const MipsBackend* backend = nullptr) {
  if (query_fde.fingerprint != index.fingerprint()) {
    throw std::invalid_argument(
        "mips_search: query FDE fingerprint does not match the index");
  }
  if (query_fde.values.size() != index.dim()) {
    throw std::invalid_argument("mips_search: query FDE dimension mismatch");
  }
  if (k_candidates == 0) {
    throw std::invalid_argument("mips_search: k_candidates must be >= 1");
  }
  static const ExactScanBackend kExact;
  const MipsBackend& b = backend != nullptr ? *backend : kExact;
  return b.search(index, query_fde.values, k_candidates);
}

}  // namespace muvera
