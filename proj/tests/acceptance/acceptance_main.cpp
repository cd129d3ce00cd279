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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "muvera/muvera.hpp"

using namespace muvera;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

MultiVector random_unit(std::mt19937_64& rng, std::size_t rows, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<float> data(rows * dim);
  for (float& x : data) x = static_cast<float>(g(rng));
  MultiVector m(dim, std::move(data));
  m.normalize();
  return m;
}

double fde_estimate(const MultiVector& q, const MultiVector& p, const FdeConfig& c) {
  const FdeEncoder enc(c);
  const Fde fq = enc.encode_query(q);
  const Fde fp = enc.encode_document(p);
  return fde_nchamfer_estimate(fq, fp, q.rows(), c.reps);
}

// Shared synthetic corpora, generated once.
struct Corpus {
  std::vector<MultiVector> docs, queries;
  std::vector<DocId> doc_ids;
  std::vector<QueryId> query_ids;
  Qrels qrels;
  NearestNeighbors oracle;

  explicit Corpus(const SynthSpec& spec) {
    SynthData d = synth_gen(spec);
    for (auto& r : d.corpus) {
      doc_ids.push_back(r.id);
      docs.push_back(std::move(r.vectors));
    }
    for (auto& r : d.queries) {
      query_ids.push_back(r.id);
      queries.push_back(std::move(r.vectors));
    }
    qrels = std::move(d.qrels);
    oracle = chamfer_oracle(docs, doc_ids, queries, query_ids);
  }

  EvalSet one_recall_set() const {
    EvalSet s{docs, doc_ids, queries, query_ids};
    s.oracle = &oracle;
    return s;
  }
  EvalSet recall_set() const {
    EvalSet s{docs, doc_ids, queries, query_ids};
    s.qrels = &qrels;
    return s;
  }
};

const Corpus& default_corpus() {
  static const Corpus c{SynthSpec{}};
  return c;
}

FdeConfig make_config(std::size_t dim, std::uint32_t reps, std::uint32_t k_sim,
                      std::uint32_t d_proj) {
  FdeConfig c;
  c.dim = static_cast<std::uint32_t>(dim);
  c.reps = reps;
  c.k_sim = k_sim;
  c.d_proj = d_proj;
  return c;
}

Run pipeline_run(const FdeIndex& index, const Corpus& c,
                 const std::vector<MultiVector>& queries, const QueryOptions& opts,
                 std::vector<RetrievalResult>* raw = nullptr) {
  Run run;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    RetrievalResult r = query(index, c.docs, queries[i], opts);
    auto& list = run[c.query_ids[i]];
    for (const ScoredDoc& h : r.hits) list.push_back(index.ids()[h.id]);
    if (raw != nullptr) raw->push_back(std::move(r));
  }
  return run;
}

// ---------------------------------------------------------------------------

Outcome criteria_1_2(bool sparsity) {
  // Shared generator so both criteria see the same 1,000 pairs.
  static std::vector<std::pair<double, double>> bound;   // (estimate, nchamfer)
  static std::vector<std::pair<std::size_t, std::size_t>> nnz;  // (count, limit)
  if (bound.empty()) {
    std::mt19937_64 rng(1001);
    const std::size_t sizes[] = {1, 4, 16, 32};
    const std::size_t dims[] = {8, 32};
    for (std::size_t i = 0; i < 1000; ++i) {
      const std::size_t d = dims[rng() % 2];
      const MultiVector q = random_unit(rng, sizes[rng() % 4], d);
      const MultiVector p = random_unit(rng, sizes[rng() % 4], d);
      FdeConfig c = make_config(d, 1 + static_cast<std::uint32_t>(rng() % 10),
                                1 + static_cast<std::uint32_t>(rng() % 6),
                                static_cast<std::uint32_t>(d));
      c.seed = rng();
      const FdeEncoder enc(c);
      const Fde fq = enc.encode_query(q);
      const Fde fp = enc.encode_document(p);
      const double est = fde_nchamfer_estimate(fq, fp, q.rows(), c.reps);
      bound.emplace_back(est, nchamfer(q, p));
      const auto count = static_cast<std::size_t>(
          std::count_if(fq.values.begin(), fq.values.end(), [](double v) { return v != 0.0; }));
      nnz.emplace_back(count, q.rows() * c.d_proj * c.reps);
    }
  }
  if (!sparsity) {
    std::size_t violations = 0;
    double worst = -1e300;
    for (auto [est, nch] : bound) {
      worst = std::max(worst, est - nch);
      if (est > nch + 1e-9) ++violations;
    }
    return {violations == 0, std::to_string(violations) + " violations in " +
                                 std::to_string(bound.size()) + " pairs, max(est-nchamfer)=" +
                                 fmt("%.3g", worst)};
  }
  std::size_t violations = 0;
  for (auto [count, limit] : nnz) violations += count > limit;
  return {violations == 0, std::to_string(violations) + " query FDEs over the nonzero bound"};
}

Outcome criterion_3() {
  std::mt19937_64 rng(3003);
  std::vector<std::pair<MultiVector, MultiVector>> pairs;
  for (int i = 0; i < 500; ++i) {
    MultiVector q = random_unit(rng, 16, 32);
    MultiVector p = random_unit(rng, 16, 32);
    pairs.emplace_back(std::move(q), std::move(p));
  }
  const std::uint32_t ks[] = {1, 3, 6};
  double mean_err[3];
  double p95 = 0.0;
  for (int ki = 0; ki < 3; ++ki) {
    std::vector<double> errs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      FdeConfig c = make_config(32, 20, ks[ki], 32);
      c.seed = 100 + i;
      errs.push_back(fde_estimate(pairs[i].first, pairs[i].second, c) -
                     nchamfer(pairs[i].first, pairs[i].second));
    }
    double s = 0.0;
    for (double e : errs) s += e;
    mean_err[ki] = s / static_cast<double>(errs.size());
    if (ks[ki] == 6) {
      std::vector<double> abs_err;
      for (double e : errs) abs_err.push_back(std::abs(e));
      std::sort(abs_err.begin(), abs_err.end());
      p95 = abs_err[static_cast<std::size_t>(std::ceil(0.95 * abs_err.size())) - 1];
    }
  }
  const bool shrinks = std::abs(mean_err[1]) < std::abs(mean_err[0]) &&
                       std::abs(mean_err[2]) < std::abs(mean_err[1]);
  return {shrinks && p95 <= 0.2,
          "mean error k_sim 1/3/6 = " + fmt("%.4f", mean_err[0]) + " / " +
              fmt("%.4f", mean_err[1]) + " / " + fmt("%.4f", mean_err[2]) +
              ", p95 |error| at k_sim 6 = " + fmt("%.4f", p95)};
}

Outcome criterion_4() {
  const Corpus& c = default_corpus();
  const FdeIndex index = FdeIndex::build(c.docs, make_config(32, 20, 5, 16));
  QueryOptions opts;
  opts.k_candidates = c.docs.size();
  opts.final_k = 100;
  std::size_t mismatched = 0;
  for (const MultiVector& q : c.queries) {
    const RetrievalResult r = query(index, c.docs, q, opts);
    const auto truth = brute_force_topk(q, c.docs, opts.final_k);
    bool same = r.hits.size() == truth.size();
    for (std::size_t i = 0; same && i < truth.size(); ++i) {
      same = r.hits[i].id == truth[i].id;
    }
    mismatched += !same;
  }
  return {mismatched == 0, std::to_string(mismatched) + " of " +
                               std::to_string(c.queries.size()) +
                               " queries differ from brute force top-100"};
}

Outcome criterion_5() {
  const Corpus& c = default_corpus();
  const EvalSet set = c.one_recall_set();
  const std::vector<GridPoint> grid = {{4, 3, 16}, {8, 4, 16}, {20, 4, 16}, {20, 5, 16}};
  const std::size_t ns[] = {10};
  const auto rows = grid_search(set, make_config(32, 20, 5, 16), grid, ns);
  bool ok = true;
  std::string detail = "1Recall@10 by d_FDE:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " " + std::to_string(rows[i].d_fde) + "=" +
              fmt("%.3f", rows[i].reports.front().value);
    if (i > 0 && rows[i].reports.front().value < rows[i - 1].reports.front().value - 0.01) {
      ok = false;
    }
  }
  return {ok, detail};
}

Outcome criterion_6() {
  SynthSpec spec;
  spec.num_docs = 2000;
  spec.num_queries = 100;
  const Corpus c(spec);
  const std::vector<std::size_t> schedule = default_candidate_schedule();
  const std::size_t depth = schedule.back();

  const FdeIndex index = FdeIndex::build(c.docs, make_config(32, 16, 4, 16));
  const Run fde = fde_rankings(index, c.queries, c.query_ids, std::min(depth, c.docs.size()));

  const TokenIndex tokens = TokenIndex::build(c.docs);
  Run sv;
  for (std::size_t i = 0; i < c.queries.size(); ++i) {
    const std::size_t k = (depth + c.queries[i].rows() - 1) / c.queries[i].rows();
    auto& list = sv[c.query_ids[i]];
    for (DocId pos : sv_candidates(c.queries[i], tokens, k, false)) {
      list.push_back(c.doc_ids[pos]);
    }
  }
  const Qrels truth = qrels_from_oracle(c.oracle);
  const std::vector<NamedRun> methods = {{"fde", fde}, {"sv", sv}};
  const double thresholds[] = {0.8};
  const auto rows = candidates_to_threshold(methods, truth, thresholds, schedule);

  std::printf("  curve N  fde_1recall  sv_1recall\n");
  for (std::size_t n : {10, 20, 50, 100, 200, 500, 1000}) {
    std::printf("  %7zu  %11.3f  %10.3f\n", n, recall_at_n(fde, truth, n).value,
                recall_at_n(sv, truth, n).value);
  }
  auto show = [](const ThresholdRow& r) {
    return r.candidates ? std::to_string(*r.candidates) : std::string("not reached");
  };
  const bool ok = rows[0].candidates &&
                  (!rows[1].candidates || *rows[0].candidates <= *rows[1].candidates);
  return {ok, "candidates for 80% 1Recall: fde " + show(rows[0]) + ", sv " + show(rows[1])};
}

Outcome criterion_7() {
  const Corpus& c = default_corpus();
  const FdeConfig config = make_config(32, 20, 4, 8);
  PqSpec pq;  // 256 centers, groups of 8
  const FdeIndex dense = FdeIndex::build(c.docs, config);
  const FdeIndex coded = FdeIndex::build(c.docs, config, pq);
  const bool size_ok = coded.payload_bytes_per_doc() == coded.dim() / 8 &&
                       dense.payload_bytes_per_doc() == 32 * coded.payload_bytes_per_doc();

  std::mt19937_64 rng(7007);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, coded.size() - 1);
  const PqCodebook& book = coded.codebook();
  double worst = 0.0;
  std::vector<double> q(coded.dim());
  for (int t = 0; t < 10000; ++t) {
    for (double& x : q) x = g(rng);
    const auto codes = coded.codes(pick(rng));
    const std::vector<float> dec = book.decode(codes);
    const double direct = dot(std::span<const double>(q), std::span<const float>(dec));
    const double asym = pq_asymmetric_dot(book, codes, std::span<const double>(q));
    worst = std::max(worst, std::abs(direct - asym));
  }

  QueryOptions opts;
  opts.k_candidates = 100;
  opts.final_k = 100;
  const EvalSet set = c.one_recall_set();
  const double r_dense =
      evaluate_run(pipeline_run(dense, c, c.queries, opts), set, std::array{std::size_t{100}})[0].value;
  const double r_pq =
      evaluate_run(pipeline_run(coded, c, c.queries, opts), set, std::array{std::size_t{100}})[0].value;
  const bool ok = size_ok && worst <= 1e-6 && std::abs(r_dense - r_pq) <= 0.02;
  return {ok, "bytes/doc " + std::to_string(coded.payload_bytes_per_doc()) + " (d_FDE " +
                  std::to_string(coded.dim()) + "), max |asym - decoded| " +
                  fmt("%.2g", worst) + ", 1Recall@100 dense " + fmt("%.3f", r_dense) +
                  " pq " + fmt("%.3f", r_pq)};
}

Outcome criterion_8() {
  SynthSpec spec;
  spec.query_duplicates = 8;
  const Corpus c(spec);
  const FdeIndex index = FdeIndex::build(c.docs, make_config(32, 20, 5, 16));
  const EvalSet set = c.recall_set();
  const std::array<std::size_t, 1> n100{100};

  QueryOptions plain;
  plain.k_candidates = 200;
  plain.final_k = 100;
  QueryOptions carved = plain;
  carved.carve_tau = kDefaultCarveTau;

  std::vector<RetrievalResult> plain_raw, carved_raw;
  const double r_plain =
      evaluate_run(pipeline_run(index, c, c.queries, plain, &plain_raw), set, n100)[0].value;
  const double r_carved =
      evaluate_run(pipeline_run(index, c, c.queries, carved, &carved_raw), set, n100)[0].value;
  double clusters = 0.0, tokens = 0.0;
  for (std::size_t i = 0; i < c.queries.size(); ++i) {
    clusters += static_cast<double>(carved_raw[i].rerank_vectors);
    tokens += static_cast<double>(c.queries[i].rows());
  }
  clusters /= static_cast<double>(c.queries.size());
  tokens /= static_cast<double>(c.queries.size());

  // tau above every pairwise dot: each token is its own cluster.
  std::size_t differing = 0;
  for (std::size_t i = 0; i < c.queries.size(); ++i) {
    const MultiVector& q = c.queries[i];
    double max_dot = -1e300;
    for (std::size_t a = 0; a < q.rows(); ++a) {
      for (std::size_t b = a + 1; b < q.rows(); ++b) {
        max_dot = std::max(max_dot, dot(q.row(a), q.row(b)));
      }
    }
    QueryOptions high = plain;
    high.carve_tau = std::nextafter(max_dot, 1e300);
    const RetrievalResult r = query(index, c.docs, q, high);
    bool same = r.hits.size() == plain_raw[i].hits.size();
    for (std::size_t j = 0; same && j < r.hits.size(); ++j) {
      same = r.hits[j].id == plain_raw[i].hits[j].id &&
             r.hits[j].score == plain_raw[i].hits[j].score;
    }
    differing += !same;
  }
  const bool ok = std::abs(r_plain - r_carved) <= 0.01 && clusters < tokens && differing == 0;
  return {ok, "Recall@100 plain " + fmt("%.3f", r_plain) + " carved " + fmt("%.3f", r_carved) +
                  ", mean clusters " + fmt("%.2f", clusters) + " of " + fmt("%.0f", tokens) +
                  " tokens, " + std::to_string(differing) + " queries differ at high tau"};
}

Outcome criterion_9() {
  const Corpus& c = default_corpus();
  const EvalSet set = c.recall_set();
  const auto seeds = consecutive_seeds(1, 10);
  const std::size_t ns[] = {100};
  const auto rows = variance_study(set, make_config(32, 20, 4, 8), seeds, ns);
  return {rows[0].stddev <= 0.02, "Recall@100 mean " + fmt("%.4f", rows[0].mean) +
                                      " std " + fmt("%.4f", rows[0].stddev) + " over 10 seeds"};
}

Outcome criterion_10() {
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t d = 32;
  const std::uint32_t d_proj = 8;
  bool ok = true;
  std::string detail;
  for (int pair = 0; pair < 5; ++pair) {
    std::vector<double> x(d), y(d);
    for (double& v : x) v = g(rng);
    for (std::size_t i = 0; i < d; ++i) y[i] = 0.5 * x[i] + g(rng);
    const double truth = dot(std::span<const double>(x), std::span<const double>(y));
    std::vector<double> samples;
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
      FdeConfig c = make_config(d, 1, 1, d_proj);
      c.seed = seed;
      const auto px = inner_project(std::span<const double>(x), 0, c);
      const auto py = inner_project(std::span<const double>(y), 0, c);
      samples.push_back(dot(std::span<const double>(px), std::span<const double>(py)));
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double se = std::sqrt(ss / static_cast<double>(samples.size() - 1)) /
                      std::sqrt(static_cast<double>(samples.size()));
    const double z = std::abs(mean - truth) / se;
    ok = ok && z <= 3.0;
    detail += (pair ? ", " : "") + fmt("z=%.2f", z);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 one-sided estimator", [] { return criteria_1_2(false); }},
      {"2 query FDE sparsity", [] { return criteria_1_2(true); }},
      {"3 approximation error trend", criterion_3},
      {"4 exhaustive rerank equals brute force", criterion_4},
      {"5 recall non-decreasing in d_FDE", criterion_5},
      {"6 FDE vs single-vector heuristic", criterion_6},
      {"7 PQ fidelity", criterion_7},
      {"8 ball carving safety", criterion_8},
      {"9 seed variance", criterion_9},
      {"10 projection expectation", criterion_10},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s criterion %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
