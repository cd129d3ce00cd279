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

// Fixed Dimensional Encodings.
//
// A query or document multi-vector is turned into one dense vector whose
// inner products approximate Chamfer similarity. For each repetition the
// embedding space is partitioned into B clusters; every cluster owns a block
// of d_proj coordinates. Query blocks hold the (projected) sum of the query
// tokens in that cluster, document blocks hold the centroid of the document
// tokens in that cluster. Empty document clusters may be filled with the
// token whose cluster id is closest. Repetitions are concatenated and an
// optional final +-1 projection reduces the result to d_final.
//
// Layout: repetition-major, then cluster index, then projected coordinate.

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/kmeans.hpp"
#include "muvera/multivector.hpp"
#include "muvera/partition.hpp"
#include "muvera/projection.hpp"

namespace muvera {

enum class PartitionerKind : std::uint8_t { kSimHash = 0, kKMeans = 1 };

inline const char* to_string(PartitionerKind kind) {
  return kind == PartitionerKind::kSimHash ? "simhash" : "kmeans";
}

struct FdeConfig {
  std::uint32_t dim = 0;     // input embedding dimension
  std::uint32_t k_sim = 4;   // hyperplanes per repetition (simhash)
  std::uint32_t d_proj = 0;  // inner projection dimension; == dim is identity
  std::uint32_t reps = 20;
  std::optional<std::uint32_t> d_final;
  bool fill_empty = true;    // document side only
  PartitionerKind partitioner = PartitionerKind::kSimHash;
  std::uint32_t num_centers = 16;  // B for k-means
  std::uint64_t seed = 1;

  std::uint32_t num_clusters() const {
    return partitioner == PartitionerKind::kSimHash ? (1u << k_sim)
                                                    : num_centers;
  }

  /// B * d_proj * reps, before any final projection.
  std::size_t base_dim() const {
    return static_cast<std::size_t>(num_clusters()) * d_proj * reps;
  }

  std::size_t output_dim() const {
    return d_final ? static_cast<std::size_t>(*d_final) : base_dim();
  }

  void validate() const {
    if (dim == 0) throw std::invalid_argument("FdeConfig: dim must be >= 1");
    if (reps == 0) throw std::invalid_argument("FdeConfig: reps must be >= 1");
    if (d_proj == 0 || d_proj > dim) {
      throw std::invalid_argument("FdeConfig: d_proj must be in [1, dim=" +
                                  std::to_string(dim) + "], got " +
                                  std::to_string(d_proj));
    }
    if (partitioner == PartitionerKind::kSimHash &&
        (k_sim < 1 || k_sim > kMaxSimHashBits)) {
      throw std::invalid_argument("FdeConfig: k_sim must be in [1, 24], got " +
                                  std::to_string(k_sim));
    }
    if (partitioner == PartitionerKind::kKMeans && num_centers == 0) {
      throw std::invalid_argument("FdeConfig: num_centers must be >= 1");
    }
    if (d_final && (*d_final == 0 || *d_final >= base_dim())) {
      throw std::invalid_argument(
          "FdeConfig: d_final must be in [1, " + std::to_string(base_dim()) +
          "), got " + std::to_string(*d_final));
    }
  }

  friend bool operator==(const FdeConfig&, const FdeConfig&) = default;
};

/// Output dimension of an FDE under `config`: d_final if set, else
/// B * d_proj * reps.
inline std::size_t fde_dim(const FdeConfig& config) {
  return config.output_dim();
}

enum class Side : std::uint8_t { kQuery = 0, kDocument = 1 };

struct Fde {
  std::vector<double> values;
  Side side = Side::kQuery;
  std::uint64_t fingerprint = 0;
};

struct KMeansTraining {
  // Per repetition, train on a seeded sample of at most this many tokens.
  std::size_t sample_limit = 100000;
  bool full_corpus = false;
  KMeansOptions lloyd;
};

class FdeEncoder {
 public:
  /// SimHash encoder; hyperplanes are drawn from (config.seed, rep).
  explicit FdeEncoder(const FdeConfig& config) : config_(config) {
    config_.validate();
    if (config_.partitioner != PartitionerKind::kSimHash) {
      throw std::invalid_argument(
          "FdeEncoder: k-means partitioners must be trained or supplied");
    }
    partitioners_.reserve(config_.reps);
    for (std::uint32_t r = 0; r < config_.reps; ++r) {
      partitioners_.emplace_back(SimHashPartitioner::create(
          config_.k_sim, config_.dim, config_.seed, r));
    }
    init_projections();
  }

  /// Encoder over caller-supplied partitioners, one per repetition.
  FdeEncoder(const FdeConfig& config, std::vector<Partitioner> partitioners)
      : config_(config), partitioners_(std::move(partitioners)) {
    config_.validate();
    if (partitioners_.size() != config_.reps) {
      throw std::invalid_argument("FdeEncoder: need one partitioner per rep");
    }
    for (const Partitioner& p : partitioners_) {
      const bool is_simhash = std::holds_alternative<SimHashPartitioner>(p);
      if (is_simhash != (config_.partitioner == PartitionerKind::kSimHash) ||
          num_clusters(p) != config_.num_clusters()) {
        throw std::invalid_argument(
            "FdeEncoder: partitioner does not match config");
      }
      const std::size_t pdim = std::visit(
          [](const auto& part) { return part.dim(); }, p);
      if (pdim != config_.dim) {
        throw std::invalid_argument("FdeEncoder: partitioner dimension");
      }
    }
    init_projections();
  }

  /// Builds the encoder for `config`, training one k-means partitioner per
  /// repetition on corpus tokens when the config asks for k-means. If the
  /// tokens hold fewer distinct values than num_centers, the config's
  /// num_centers is lowered to the effective count.
  static FdeEncoder train(FdeConfig config,
                          std::span<const MultiVector> corpus,
                          const KMeansTraining& opts = {}) {
    if (config.partitioner == PartitionerKind::kSimHash) {
      return FdeEncoder(config);
    }
    config.validate();
    std::vector<float> tokens;
    for (const MultiVector& doc : corpus) {
      if (doc.dim() != config.dim) {
        throw std::invalid_argument("FdeEncoder::train: dimension mismatch");
      }
      tokens.insert(tokens.end(), doc.data().begin(), doc.data().end());
    }
    const std::size_t total = tokens.size() / config.dim;
    if (total == 0) throw std::invalid_argument("FdeEncoder::train: no tokens");

    std::vector<KMeansResult> trained;
    std::size_t effective = config.num_centers;
    for (std::uint32_t r = 0; r < config.reps; ++r) {
      std::vector<float> sample;
      std::size_t n = total;
      std::span<const float> data = tokens;
      if (!opts.full_corpus && total > opts.sample_limit) {
        std::vector<std::size_t> idx(total);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<std::size_t> picked;
        std::mt19937_64 rng(derive_key(config.seed, r, Purpose::kKMeansInit));
        std::sample(idx.begin(), idx.end(), std::back_inserter(picked),
                    opts.sample_limit, rng);
        sample.reserve(picked.size() * config.dim);
        for (std::size_t i : picked) {
          sample.insert(sample.end(),
                        tokens.begin() + static_cast<std::ptrdiff_t>(i * config.dim),
                        tokens.begin() + static_cast<std::ptrdiff_t>((i + 1) * config.dim));
        }
        n = picked.size();
        data = sample;
      }
      trained.push_back(lloyd_kmeans(data, n, config.dim, config.num_centers,
                                     derive_key(config.seed, r,
                                                Purpose::kKMeansInit),
                                     opts.lloyd));
      effective = std::min(effective, trained.back().k);
    }
    config.num_centers = static_cast<std::uint32_t>(effective);
    std::vector<Partitioner> parts;
    for (KMeansResult& t : trained) {
      t.centers.resize(effective * config.dim);
      parts.emplace_back(KMeansPartitioner(config.dim, std::move(t.centers)));
    }
    return FdeEncoder(config, std::move(parts));
  }

  const FdeConfig& config() const { return config_; }
  std::span<const Partitioner> partitioners() const { return partitioners_; }
  std::size_t output_dim() const { return config_.output_dim(); }

  /// Hash of the config and every partitioner parameter. Query and document
  /// FDEs are comparable only when their fingerprints agree.
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// Projects x with the inner projection of repetition `rep`.
  template <typename T>
  void inner_project(std::span<const T> x, std::size_t rep,
                     std::span<double> out) const {
    if (x.size() != config_.dim) {
      throw std::invalid_argument("inner_project: dimension mismatch");
    }
    if (!inner_[rep]) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = static_cast<double>(x[i]);
      }
      return;
    }
    inner_[rep]->apply(x, out);
  }

  Fde encode_query(const MultiVector& q) const {
    return encode(q, Side::kQuery);
  }

  Fde encode_document(const MultiVector& p) const {
    return encode(p, Side::kDocument);
  }

  /// Applies the configured final projection to a base-dimension vector.
  std::vector<double> apply_final(std::span<const double> v) const {
    if (!final_) return {v.begin(), v.end()};
    return final_->apply(v);
  }

 private:
  void init_projections() {
    inner_.clear();
    for (std::uint32_t r = 0; r < config_.reps; ++r) {
      if (config_.d_proj == config_.dim) {
        inner_.emplace_back(std::nullopt);
      } else {
        inner_.emplace_back(SignProjection(
            config_.d_proj, config_.dim,
            derive_key(config_.seed, r, Purpose::kInnerProjection)));
      }
    }
    if (config_.d_final) {
      final_.emplace(*config_.d_final, config_.base_dim(),
                     derive_key(config_.seed, 0, Purpose::kFinalProjection));
    }

    Fingerprint fp;
    fp.add(config_.dim);
    fp.add(config_.k_sim);
    fp.add(config_.d_proj);
    fp.add(config_.reps);
    fp.add(config_.d_final.value_or(0));
    fp.add(config_.partitioner);
    fp.add(config_.num_centers);
    fp.add(config_.seed);
    for (const Partitioner& p : partitioners_) {
      if (const auto* s = std::get_if<SimHashPartitioner>(&p)) {
        fp.add_bytes(s->gaussians().data(), s->gaussians().size_bytes());
      } else {
        const auto& k = std::get<KMeansPartitioner>(p);
        fp.add_bytes(k.centers().data(), k.centers().size_bytes());
      }
    }
    fingerprint_ = fp.value();
  }

  // Rank of token j as a fill candidate for empty cluster k; lower is closer.
  double fill_distance(const Partitioner& part, const MultiVector& p,
                       std::size_t j, ClusterId token_cluster,
                       ClusterId k) const {
    if (std::holds_alternative<SimHashPartitioner>(part)) {
      return static_cast<double>(hamming(token_cluster, k));
    }
    const auto& km = std::get<KMeansPartitioner>(part);
    return squared_distance(p.row(j), km.center(k.value));
  }

  Fde encode(const MultiVector& m, Side side) const {
    if (m.empty()) throw std::invalid_argument("FDE: empty multi-vector");
    if (m.dim() != config_.dim) {
      throw std::invalid_argument("FDE: input dimension " +
                                  std::to_string(m.dim()) + " != " +
                                  std::to_string(config_.dim));
    }
    const std::size_t num_b = config_.num_clusters();
    const std::size_t dp = config_.d_proj;
    const std::size_t n = m.rows();
    std::vector<double> base(config_.base_dim(), 0.0);
    std::vector<ClusterId> clusters(n);
    std::vector<double> projected(n * dp);
    std::vector<std::uint32_t> counts(num_b);

    for (std::uint32_t r = 0; r < config_.reps; ++r) {
      const Partitioner& part = partitioners_[r];
      std::fill(counts.begin(), counts.end(), 0);
      double* rep_base = base.data() + static_cast<std::size_t>(r) * num_b * dp;
      for (std::size_t j = 0; j < n; ++j) {
        clusters[j] = assign(part, m.row(j));
        std::span<double> pj(projected.data() + j * dp, dp);
        inner_project(m.row(j), r, pj);
        ++counts[clusters[j].value];
        double* block = rep_base + clusters[j].value * dp;
        for (std::size_t t = 0; t < dp; ++t) block[t] += pj[t];
      }
      if (side == Side::kQuery) continue;

      for (std::size_t k = 0; k < num_b; ++k) {
        double* block = rep_base + k * dp;
        if (counts[k] > 0) {
          const double inv = 1.0 / counts[k];
          for (std::size_t t = 0; t < dp; ++t) block[t] *= inv;
          continue;
        }
        if (!config_.fill_empty) continue;
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
          const double d = fill_distance(
              part, m, j, clusters[j], ClusterId{static_cast<std::uint32_t>(k)});
          if (d < best_d) {
            best_d = d;
            best = j;
          }
        }
        std::copy_n(projected.data() + best * dp, dp, block);
      }
    }

    Fde out;
    out.side = side;
    out.fingerprint = fingerprint_;
    out.values = final_ ? final_->apply(std::span<const double>(base))
                        : std::move(base);
    return out;
  }

  FdeConfig config_;
  std::vector<Partitioner> partitioners_;
  std::vector<std::optional<SignProjection>> inner_;
  std::optional<SignProjection> final_;
  std::uint64_t fingerprint_ = 0;
};

inline Fde generate_query_fde(const MultiVector& q, const FdeConfig& config) {
  return FdeEncoder(config).encode_query(q);
}

inline Fde generate_doc_fde(const MultiVector& p, const FdeConfig& config) {
  return FdeEncoder(config).encode_document(p);
}

/// NChamfer estimate from a query/document FDE pair: the FDE dot product
/// averaged over repetitions and query tokens.
inline double fde_nchamfer_estimate(const Fde& query, const Fde& doc,
                                    std::size_t query_tokens, std::size_t reps) {
  if (query.side != Side::kQuery || doc.side != Side::kDocument) {
    throw std::invalid_argument("fde_nchamfer_estimate: expected (query, document) FDEs");
  }
  if (query.fingerprint != doc.fingerprint) {
    throw std::invalid_argument("fde_nchamfer_estimate: FDEs from different configs");
  }
  if (query_tokens == 0 || reps == 0) {
    throw std::invalid_argument("fde_nchamfer_estimate: counts must be >= 1");
  }
  return dot(std::span<const double>(query.values), std::span<const double>(doc.values)) /
         (static_cast<double>(query_tokens) * static_cast<double>(reps));
}

/// Inner projection of repetition `rep` under `config`: identity when
/// d_proj == dim, else (1/sqrt(d_proj)) S x with S a keyed +-1 matrix.
template <typename T>
inline std::vector<double> inner_project(std::span<const T> x, std::size_t rep,
                                         const FdeConfig& config) {
  if (config.d_proj > config.dim) {
    throw std::invalid_argument("inner_project: d_proj > dim");
  }
  if (x.size() != config.dim) {
    throw std::invalid_argument("inner_project: dimension mismatch");
  }
  if (config.d_proj == config.dim) return {x.begin(), x.end()};
  return SignProjection(config.d_proj, config.dim,
                        derive_key(config.seed, rep, Purpose::kInnerProjection))
      .apply(x);
}

/// Final projection of v down to d_final coordinates, keyed by seed.
template <typename T>
inline std::vector<double> final_project(std::span<const T> v,
                                         std::size_t d_final,
                                         std::uint64_t seed) {
  if (d_final == 0 || d_final >= v.size()) {
    throw std::invalid_argument("final_project: d_final must be in [1, " +
                                std::to_string(v.size()) + ")");
  }
  return SignProjection(d_final, v.size(),
                        derive_key(seed, 0, Purpose::kFinalProjection))
      .apply(v);
}

}  // namespace muvera
