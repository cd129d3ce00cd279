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

// Recall metrics and experiment drivers.
//
// Recall@N is |top-N ∩ relevant| / |relevant| averaged over queries that
// have at least one relevant document. 1Recall@N is the fraction of queries
// whose exact Chamfer nearest neighbor is in the top N; it equals Recall@N
// against single-document qrels built from that oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "muvera/chamfer.hpp"
#include "muvera/common.hpp"
#include "muvera/fde.hpp"
#include "muvera/index.hpp"
#include "muvera/multivector.hpp"
#include "muvera/parallel.hpp"

namespace muvera {

struct Qrels {
  // query id -> (doc id -> grade >= 1)
  std::map<QueryId, std::map<DocId, int>> relevant;

  void add(QueryId q, DocId d, int grade) {
    if (grade >= 1) relevant[q][d] = grade;
  }
};

// query id -> ranked doc ids
using Run = std::map<QueryId, std::vector<DocId>>;

// query id -> exact Chamfer nearest neighbor
using NearestNeighbors = std::map<QueryId, DocId>;

struct RecallReport {
  std::string metric;
  std::size_t n = 0;
  double value = 0.0;
  std::size_t query_count = 0;  // queries that contributed
  std::size_t skipped = 0;      // queries without relevant documents
  std::uint64_t fingerprint = 0;
  std::size_t candidates = 0;
};

inline RecallReport recall_at_n(const Run& run, const Qrels& qrels,
                                std::size_t n) {
  if (n == 0) throw std::invalid_argument("recall_at_n: N must be >= 1");
  if (run.empty()) throw std::invalid_argument("recall_at_n: empty run");
  RecallReport r{.metric = "recall", .n = n, .candidates = n};
  double total = 0.0;
  for (const auto& [qid, ranking] : run) {
    auto it = qrels.relevant.find(qid);
    if (it == qrels.relevant.end() || it->second.empty()) {
      ++r.skipped;
      continue;
    }
    const std::size_t depth = std::min(n, ranking.size());
    std::set<DocId> top(ranking.begin(),
                        ranking.begin() + static_cast<std::ptrdiff_t>(depth));
    std::size_t hits = 0;
    for (const auto& [doc, grade] : it->second) hits += top.count(doc);
    total += static_cast<double>(hits) / static_cast<double>(it->second.size());
    ++r.query_count;
  }
  r.value = r.query_count == 0 ? 0.0 : total / static_cast<double>(r.query_count);
  return r;
}

inline Qrels qrels_from_oracle(const NearestNeighbors& nn) {
  Qrels q;
  for (const auto& [qid, doc] : nn) q.add(qid, doc, 1);
  return q;
}

inline RecallReport one_recall_at_n(const Run& fde_rankings,
                                    const NearestNeighbors& chamfer_1nn,
                                    std::size_t n) {
  if (fde_rankings.size() != chamfer_1nn.size() ||
      !std::equal(fde_rankings.begin(), fde_rankings.end(), chamfer_1nn.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw std::invalid_argument(
        "one_recall_at_n: run and oracle cover different query ids");
  }
  RecallReport r = recall_at_n(fde_rankings, qrels_from_oracle(chamfer_1nn), n);
  r.metric = "1recall";
  return r;
}

/// Exact Chamfer 1-NN per query (external doc ids from `doc_ids`).
inline NearestNeighbors chamfer_oracle(std::span<const MultiVector> corpus,
                                       std::span<const DocId> doc_ids,
                                       std::span<const MultiVector> queries,
                                       std::span<const QueryId> query_ids,
                                       std::size_t threads = 1) {
  std::vector<DocId> best(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    best[i] = doc_ids[brute_force_topk(queries[i], corpus, 1).front().id];
  });
  NearestNeighbors nn;
  for (std::size_t i = 0; i < queries.size(); ++i) nn[query_ids[i]] = best[i];
  return nn;
}

/// FDE-only ranking (no rerank) of every query, `depth` deep.
inline Run fde_rankings(const FdeIndex& index,
                        std::span<const MultiVector> queries,
                        std::span<const QueryId> query_ids, std::size_t depth,
                        std::size_t threads = 1) {
  std::vector<std::vector<DocId>> ranked(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    const Fde qf = index.encoder().encode_query(queries[i]);
    for (const ScoredDoc& s : mips_search(index, qf, depth)) {
      ranked[i].push_back(index.ids()[s.id]);
    }
  });
  Run run;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    run[query_ids[i]] = std::move(ranked[i]);
  }
  return run;
}

/// Inputs shared by the experiment drivers. When `oracle` is set, reports
/// are 1Recall against it; otherwise Recall against `qrels`.
struct EvalSet {
  std::span<const MultiVector> corpus;
  std::span<const DocId> doc_ids;
  std::span<const MultiVector> queries;
  std::span<const QueryId> query_ids;
  const Qrels* qrels = nullptr;
  const NearestNeighbors* oracle = nullptr;
  std::size_t threads = 1;
};

inline std::vector<RecallReport> evaluate_run(const Run& run,
                                              const EvalSet& set,
                                              std::span<const std::size_t> ns) {
  std::vector<RecallReport> out;
  for (std::size_t n : ns) {
    if (set.oracle != nullptr) {
      out.push_back(one_recall_at_n(run, *set.oracle, n));
    } else if (set.qrels != nullptr) {
      out.push_back(recall_at_n(run, *set.qrels, n));
    } else {
      throw std::invalid_argument("evaluate: need qrels or an oracle");
    }
  }
  return out;
}

/// Builds an FDE index for `config` and reports recall of the FDE ranking.
inline std::vector<RecallReport> evaluate_config(const FdeConfig& config,
                                                 const EvalSet& set,
                                                 std::span<const std::size_t> ns) {
  if (ns.empty()) throw std::invalid_argument("evaluate: empty N list");
  BuildOptions opts;
  opts.ids.assign(set.doc_ids.begin(), set.doc_ids.end());
  opts.threads = set.threads;
  const FdeIndex index = FdeIndex::build(set.corpus, config, std::nullopt, opts);
  const std::size_t depth = *std::max_element(ns.begin(), ns.end());
  const Run run =
      fde_rankings(index, set.queries, set.query_ids, depth, set.threads);
  std::vector<RecallReport> reports = evaluate_run(run, set, ns);
  for (RecallReport& r : reports) r.fingerprint = index.fingerprint();
  return reports;
}

struct GridPoint {
  std::uint32_t reps = 1;
  std::uint32_t k_sim = 1;
  std::uint32_t d_proj = 1;
};

struct GridRow {
  FdeConfig config;
  std::size_t d_fde = 0;
  std::vector<RecallReport> reports;  // one per N
  bool pareto = false;  // judged on the first N
};

inline void mark_pareto(std::vector<GridRow>& rows) {
  for (GridRow& r : rows) {
    r.pareto = std::none_of(rows.begin(), rows.end(), [&](const GridRow& o) {
      return o.d_fde <= r.d_fde &&
             o.reports.front().value > r.reports.front().value;
    });
  }
}

/// One row per grid point, sorted by d_FDE. A row is Pareto-optimal when
/// no other row has dimension <= its own and strictly higher recall.
inline std::vector<GridRow> grid_search(const EvalSet& set,
                                        const FdeConfig& base,
                                        std::span<const GridPoint> grid,
                                        std::span<const std::size_t> ns) {
  if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  std::vector<GridRow> rows;
  for (const GridPoint& g : grid) {
    GridRow row;
    row.config = base;
    row.config.reps = g.reps;
    row.config.k_sim = g.k_sim;
    row.config.d_proj = g.d_proj;
    row.d_fde = fde_dim(row.config);
    row.reports = evaluate_config(row.config, set, ns);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const GridRow& a, const GridRow& b) { return a.d_fde < b.d_fde; });
  mark_pareto(rows);
  return rows;
}

struct VarianceRow {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  std::vector<double> values;  // one per seed
};

/// Regenerates all FDEs for each seed and summarizes recall per N.
inline std::vector<VarianceRow> variance_study(const EvalSet& set,
                                               const FdeConfig& config,
                                               std::span<const std::uint64_t> seeds,
                                               std::span<const std::size_t> ns) {
  if (seeds.size() < 2) {
    throw std::invalid_argument("variance_study: need at least 2 seeds");
  }
  std::vector<VarianceRow> rows(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) rows[i].n = ns[i];
  for (std::uint64_t seed : seeds) {
    FdeConfig c = config;
    c.seed = seed;
    const std::vector<RecallReport> reports = evaluate_config(c, set, ns);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      rows[i].values.push_back(reports[i].value);
    }
  }
  for (VarianceRow& r : rows) {
    const double k = static_cast<double>(r.values.size());
    double sum = 0.0;
    for (double v : r.values) sum += v;
    r.mean = sum / k;
    double ss = 0.0;
    for (double v : r.values) ss += (v - r.mean) * (v - r.mean);
    r.stddev = std::sqrt(ss / (k - 1.0));
  }
  return rows;
}

inline std::vector<std::uint64_t> consecutive_seeds(std::uint64_t first,
                                                    std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = first + i;
  return s;
}

/// 10, 20, ..., 100, then 200, 300, ..., 10000.
inline std::vector<std::size_t> default_candidate_schedule() {
  std::vector<std::size_t> s;
  for (std::size_t n = 10; n <= 100; n += 10) s.push_back(n);
  for (std::size_t n = 200; n <= 10000; n += 100) s.push_back(n);
  return s;
}

struct NamedRun {
  std::string method;
  Run run;
};

struct ThresholdRow {
  std::string method;
  double threshold = 0.0;
  std::optional<std::size_t> candidates;  // nullopt: not reached
  double recall_at_candidates = 0.0;
};

/// Smallest N in `schedule` at which each method's recall reaches each
/// threshold.
inline std::vector<ThresholdRow> candidates_to_threshold(
    std::span<const NamedRun> methods, const Qrels& truth,
    std::span<const double> thresholds, std::span<const std::size_t> schedule) {
  if (schedule.empty()) {
    throw std::invalid_argument("candidates_to_threshold: empty schedule");
  }
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw std::invalid_argument(
          "candidates_to_threshold: thresholds must be in (0, 1]");
    }
  }
  std::vector<ThresholdRow> out;
  for (const NamedRun& m : methods) {
    std::vector<double> curve;
    for (std::size_t n : schedule) curve.push_back(recall_at_n(m.run, truth, n).value);
    for (double t : thresholds) {
      ThresholdRow row;
      row.method = m.method;
      row.threshold = t;
      for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (curve[i] >= t) {
          row.candidates = schedule[i];
          row.recall_at_candidates = curve[i];
          break;
        }
      }
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace muvera
