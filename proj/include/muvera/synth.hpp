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

// Synthetic multi-vector corpora with planted relevance.
//
// Each cluster has a unit direction c. A document picks a cluster and draws
// every token as normalize(c + cluster_spread * g / sqrt(dim)), g standard
// normal, so tokens of one document are related but distinct. A query picks
// a document, samples query_tokens of its tokens without replacement and
// perturbs each as normalize(t + noise * g). The source document is marked
// relevant. Optionally each query gets near-duplicate copies of some of its
// tokens appended.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "muvera/common.hpp"
#include "muvera/eval.hpp"
#include "muvera/io.hpp"
#include "muvera/multivector.hpp"

namespace muvera {

struct SynthSpec {
  std::size_t num_docs = 1000;
  std::size_t tokens_min = 32;
  std::size_t tokens_max = 32;
  std::size_t dim = 32;
  std::size_t num_clusters = 50;
  double cluster_spread = 1.0;
  double noise = 0.05;
  std::size_t num_queries = 100;
  std::size_t query_tokens = 16;
  std::size_t query_duplicates = 0;
  double duplicate_noise = 0.01;
  std::uint64_t seed = 7;

  void validate() const {
    if (num_docs == 0 || num_queries == 0 || dim == 0 || num_clusters == 0 ||
        tokens_min == 0 || query_tokens == 0) {
      throw std::invalid_argument("SynthSpec: all counts must be >= 1");
    }
    if (tokens_max < tokens_min) {
      throw std::invalid_argument("SynthSpec: tokens_max < tokens_min");
    }
    if (query_tokens > tokens_min) {
      throw std::invalid_argument(
          "SynthSpec: query_tokens must not exceed tokens_min");
    }
    if (!(noise >= 0.0) || !(cluster_spread >= 0.0) || !(duplicate_noise >= 0.0)) {
      throw std::invalid_argument("SynthSpec: noise scales must be >= 0");
    }
  }
};

struct SynthData {
  std::vector<MvecRecord> corpus;
  std::vector<MvecRecord> queries;
  Qrels qrels;
  std::vector<std::size_t> planted;  // per query, source corpus position
  std::vector<std::size_t> doc_cluster;
};

inline SynthData synth_gen(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(derive_key(spec.seed, 0, Purpose::kSynth));
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = spec.dim;

  auto normalized = [&](std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) return;
    for (double& x : v) x /= n;
  };

  std::vector<std::vector<double>> centers(spec.num_clusters, std::vector<double>(d));
  for (auto& c : centers) {
    for (double& x : c) x = normal(rng);
    normalized(c);
  }

  SynthData out;
  std::uniform_int_distribution<std::size_t> cluster_pick(0, spec.num_clusters - 1);
  std::uniform_int_distribution<std::size_t> len_pick(spec.tokens_min, spec.tokens_max);
  const double spread = spec.cluster_spread / std::sqrt(static_cast<double>(d));
  std::vector<double> tok(d);
  for (std::size_t i = 0; i < spec.num_docs; ++i) {
    const std::size_t k = cluster_pick(rng);
    const std::size_t m = len_pick(rng);
    std::vector<float> data;
    data.reserve(m * d);
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t j = 0; j < d; ++j) tok[j] = centers[k][j] + spread * normal(rng);
      normalized(tok);
      data.insert(data.end(), tok.begin(), tok.end());
    }
    out.corpus.push_back({i, MultiVector(d, std::move(data))});
    out.doc_cluster.push_back(k);
  }

  std::uniform_int_distribution<std::size_t> doc_pick(0, spec.num_docs - 1);
  for (std::size_t qi = 0; qi < spec.num_queries; ++qi) {
    const std::size_t src = doc_pick(rng);
    const MultiVector& doc = out.corpus[src].vectors;
    std::vector<std::size_t> rows(doc.rows());
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(spec.query_tokens);
    std::vector<float> data;
    for (std::size_t r : rows) {
      for (std::size_t j = 0; j < d; ++j) tok[j] = doc.row(r)[j] + spec.noise * normal(rng);
      normalized(tok);
      data.insert(data.end(), tok.begin(), tok.end());
    }
    for (std::size_t dup = 0; dup < spec.query_duplicates; ++dup) {
      const std::size_t base = dup % spec.query_tokens;
      for (std::size_t j = 0; j < d; ++j) {
        tok[j] = data[base * d + j] + spec.duplicate_noise * normal(rng);
      }
      normalized(tok);
      data.insert(data.end(), tok.begin(), tok.end());
    }
    out.queries.push_back({qi, MultiVector(d, std::move(data))});
    out.qrels.add(qi, src, 1);
    out.planted.push_back(src);
  }
  return out;
}

inline std::vector<std::string> apply_synth_keys(SynthSpec& s, const KeyValues& kv) {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : kv) {
    if (k == "num_docs") s.num_docs = detail::parse_u64(k, v);
    else if (k == "tokens_min") s.tokens_min = detail::parse_u64(k, v);
    else if (k == "tokens_max") s.tokens_max = detail::parse_u64(k, v);
    else if (k == "tokens") s.tokens_min = s.tokens_max = detail::parse_u64(k, v);
    else if (k == "dim") s.dim = detail::parse_u64(k, v);
    else if (k == "num_clusters") s.num_clusters = detail::parse_u64(k, v);
    else if (k == "cluster_spread") s.cluster_spread = detail::parse_double(k, v);
    else if (k == "noise") s.noise = detail::parse_double(k, v);
    else if (k == "num_queries") s.num_queries = detail::parse_u64(k, v);
    else if (k == "query_tokens") s.query_tokens = detail::parse_u64(k, v);
    else if (k == "query_duplicates") s.query_duplicates = detail::parse_u64(k, v);
    else if (k == "duplicate_noise") s.duplicate_noise = detail::parse_double(k, v);
    else if (k == "seed") s.seed = detail::parse_u64(k, v);
    else unknown.push_back(k);
  }
  return unknown;
}

inline KeyValues synth_spec_to_kv(const SynthSpec& s) {
  auto num = [](double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
  };
  return {{"num_docs", std::to_string(s.num_docs)},
          {"tokens_min", std::to_string(s.tokens_min)},
          {"tokens_max", std::to_string(s.tokens_max)},
          {"dim", std::to_string(s.dim)},
          {"num_clusters", std::to_string(s.num_clusters)},
          {"cluster_spread", num(s.cluster_spread)},
          {"noise", num(s.noise)},
          {"num_queries", std::to_string(s.num_queries)},
          {"query_tokens", std::to_string(s.query_tokens)},
          {"query_duplicates", std::to_string(s.query_duplicates)},
          {"duplicate_noise", num(s.duplicate_noise)},
          {"seed", std::to_string(s.seed)}};
}

}  // namespace muvera
