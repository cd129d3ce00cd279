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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "muvera/muvera.hpp"

namespace muvera::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

// Output sink: a file when a path is given, else the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
    out_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& get() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

struct FdeFlags {
  std::string config_path;
  std::optional<std::uint32_t> k_sim, d_proj, reps, d_final, num_centers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> partitioner;
  bool no_fill = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value FDE config file");
    app->add_option("--k-sim", k_sim, "SimHash hyperplanes per repetition");
    app->add_option("--d-proj", d_proj, "inner projection dimension (default: dim)");
    app->add_option("--reps", reps, "number of repetitions");
    app->add_option("--d-final", d_final, "final projection dimension (0: none)");
    app->add_option("--partitioner", partitioner, "simhash | kmeans")
        ->check(CLI::IsMember({"simhash", "kmeans"}));
    app->add_option("--num-centers", num_centers, "k-means clusters per repetition");
    app->add_option("--seed", seed, "FDE seed");
    app->add_flag("--no-fill", no_fill, "disable fill_empty_clusters for documents");
  }

  FdeConfig resolve(std::size_t dim) const {
    FdeConfig c;
    c.dim = 0;
    if (!config_path.empty()) {
      const auto unknown = apply_fde_keys(c, read_kv_file(config_path));
      for (const auto& k : unknown) {
        if (k != "d_fde") throw std::invalid_argument("unknown config key: " + k);
      }
    }
    if (k_sim) c.k_sim = *k_sim;
    if (d_proj) c.d_proj = *d_proj;
    if (reps) c.reps = *reps;
    if (d_final) {
      if (*d_final == 0) c.d_final.reset();
      else c.d_final = *d_final;
    }
    if (num_centers) c.num_centers = *num_centers;
    if (seed) c.seed = *seed;
    if (partitioner) {
      c.partitioner = *partitioner == "kmeans" ? PartitionerKind::kKMeans
                                               : PartitionerKind::kSimHash;
    }
    if (no_fill) c.fill_empty = false;
    if (c.dim == 0) c.dim = static_cast<std::uint32_t>(dim);
    if (c.dim != dim) {
      throw std::invalid_argument("config dim " + std::to_string(c.dim) +
                                  " does not match data dim " + std::to_string(dim));
    }
    if (c.d_proj == 0) c.d_proj = c.dim;
    c.validate();
    return c;
  }
};

Collection load_collection(const std::string& path, bool normalize) {
  Collection c = split_records(read_mvec(path, normalize));
  if (c.items.empty()) throw std::runtime_error(path + ": no records");
  return c;
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

NearestNeighbors oracle_from_run(const RunFile& run) {
  NearestNeighbors nn;
  for (const auto& [q, docs] : run.ranking()) {
    if (!docs.empty()) nn[q] = docs.front();
  }
  return nn;
}

void print_report_table(std::ostream& out, const std::vector<RecallReport>& rs) {
  out << "metric\tn\tvalue\tqueries\tskipped\n";
  for (const RecallReport& r : rs) {
    out << r.metric << '\t' << r.n << '\t' << std::fixed << std::setprecision(4)
        << r.value << '\t' << r.query_count << '\t' << r.skipped << '\n';
  }
  out.unsetf(std::ios::fixed);
}

KeyValues fde_header(const FdeConfig& c, std::uint64_t fingerprint) {
  KeyValues kv = fde_config_to_kv(c);
  kv["fingerprint"] = hex(fingerprint);
  return kv;
}

// ---------------------------------------------------------------------------

int run_synth(const std::string& spec_path, const std::vector<std::string>& sets,
              const std::string& out_dir, std::ostream& out) {
  SynthSpec spec;
  KeyValues kv;
  if (!spec_path.empty()) kv = read_kv_file(spec_path);
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
    kv[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
  }
  const auto unknown = apply_synth_keys(spec, kv);
  if (!unknown.empty()) throw std::invalid_argument("unknown synth key: " + unknown.front());
  const SynthData data = synth_gen(spec);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_mvec(dir / "corpus.mvec", data.corpus);
  write_mvec(dir / "queries.mvec", data.queries);
  {
    std::ofstream q(dir / "qrels.tsv");
    write_qrels(q, data.qrels);
  }
  {
    std::ofstream s(dir / "synth.cfg");
    write_kv(s, synth_spec_to_kv(spec));
  }
  out << "wrote " << data.corpus.size() << " documents, " << data.queries.size()
      << " queries to " << out_dir << '\n';
  return 0;
}

int run_import(const std::string& text, const std::string& dest, bool normalize,
               std::ostream& out) {
  std::ifstream in(text);
  if (!in) throw std::runtime_error("cannot open " + text);
  std::vector<MvecRecord> recs = import_text(in);
  if (normalize) {
    for (auto& r : recs) r.vectors.normalize();
  }
  write_mvec(dest, recs);
  out << "imported " << recs.size() << " records into " << dest << '\n';
  return 0;
}

struct BuildArgs {
  std::string corpus, out_path;
  FdeFlags fde;
  bool pq = false;
  std::uint32_t pq_centers = 256, pq_group = 8;
  std::uint64_t pq_seed = 1;
  bool normalize = false;
  bool kmeans_full = false;
  std::size_t threads = 1;
};

int run_build(const BuildArgs& a, std::ostream& out) {
  Collection corpus = load_collection(a.corpus, a.normalize);
  const FdeConfig config = a.fde.resolve(corpus.items.front().dim());
  std::optional<PqSpec> pq;
  if (a.pq) {
    PqSpec s;
    s.centers = a.pq_centers;
    s.group_width = a.pq_group;
    s.seed = a.pq_seed;
    pq = s;
  }
  BuildOptions opts;
  opts.ids = corpus.ids;
  opts.threads = a.threads;
  opts.kmeans.full_corpus = a.kmeans_full;
  const FdeIndex index = FdeIndex::build(corpus.items, config, pq, opts);
  write_index(a.out_path, index);
  out << "built index of " << index.size() << " documents, d_FDE "
      << index.dim() << (index.compressed() ? " (PQ)" : "") << " -> "
      << a.out_path << '\n';
  return 0;
}

struct QueryArgs {
  std::string index, corpus, queries, out_path;
  std::size_t k_candidates = 100, final_k = 10;
  std::optional<double> carve_tau;
  bool fde_only = false;
  bool normalize = false;
  std::size_t threads = 1;
};

int run_query(const QueryArgs& a, std::ostream& out) {
  const FdeIndex index = read_index(a.index);
  const Collection queries = load_collection(a.queries, a.normalize);
  RunFile run;
  run.header = fde_header(index.config(), index.fingerprint());
  run.header["k_candidates"] = std::to_string(a.k_candidates);
  run.header["mode"] = a.fde_only ? "fde" : "rerank";
  if (index.compressed()) {
    run.header["pq_centers"] = std::to_string(index.pq_spec()->centers);
    run.header["pq_group"] = std::to_string(index.pq_spec()->group_width);
    run.header["pq_seed"] = std::to_string(index.pq_spec()->seed);
  }

  std::vector<std::vector<RunEntry>> per_query(queries.items.size());
  if (a.fde_only) {
    parallel_for(queries.items.size(), a.threads, [&](std::size_t i) {
      const Fde qf = index.encoder().encode_query(queries.items[i]);
      const auto hits = mips_search(index, qf, a.k_candidates);
      for (std::size_t r = 0; r < hits.size(); ++r) {
        per_query[i].push_back({queries.ids[i], index.ids()[hits[r].id], r + 1,
                                hits[r].score});
      }
    });
  } else {
    if (a.corpus.empty()) throw std::invalid_argument("--corpus is required for reranking");
    const Collection corpus = load_collection(a.corpus, a.normalize);
    if (corpus.ids != index.ids()) {
      throw std::invalid_argument("corpus ids do not match the index");
    }
    QueryOptions opts;
    opts.k_candidates = a.k_candidates;
    opts.final_k = a.final_k;
    opts.carve_tau = a.carve_tau;
    run.header["final_k"] = std::to_string(a.final_k);
    run.header["carve_tau"] = a.carve_tau ? std::to_string(*a.carve_tau) : "none";
    parallel_for(queries.items.size(), a.threads, [&](std::size_t i) {
      const RetrievalResult res = query(index, corpus.items, queries.items[i], opts);
      for (std::size_t r = 0; r < res.hits.size(); ++r) {
        per_query[i].push_back({queries.ids[i], index.ids()[res.hits[r].id],
                                r + 1, res.hits[r].score});
      }
    });
  }
  for (auto& v : per_query) run.entries.insert(run.entries.end(), v.begin(), v.end());
  Sink sink(a.out_path, out);
  write_run(sink.get(), run);
  return 0;
}

struct EvalArgs {
  std::string run, qrels, oracle, format = "jsonl", out_path;
  std::string ns = "1,10,100";
};

int run_eval_recall(const EvalArgs& a, std::ostream& out) {
  const RunFile run = read_run(a.run);
  const Run ranking = run.ranking();
  std::vector<RecallReport> reports;
  const auto ns = parse_list(a.ns);
  if (a.qrels.empty() && a.oracle.empty()) {
    throw std::invalid_argument("eval recall needs --qrels and/or --oracle");
  }
  std::uint64_t fp = 0;
  if (auto it = run.header.find("fingerprint"); it != run.header.end()) {
    fp = std::stoull(it->second, nullptr, 16);
  }
  if (!a.qrels.empty()) {
    const Qrels qrels = read_qrels(a.qrels);
    for (std::size_t n : ns) reports.push_back(recall_at_n(ranking, qrels, n));
  }
  if (!a.oracle.empty()) {
    const NearestNeighbors nn = oracle_from_run(read_run(a.oracle));
    for (std::size_t n : ns) reports.push_back(one_recall_at_n(ranking, nn, n));
  }
  for (RecallReport& r : reports) r.fingerprint = fp;
  Sink sink(a.out_path, out);
  if (a.format == "table") {
    print_report_table(sink.get(), reports);
  } else {
    for (const RecallReport& r : reports) {
      json j = to_json(r);
      j["config"] = run.header;
      sink.get() << j.dump() << '\n';
    }
  }
  return 0;
}

struct ExperimentArgs {
  std::string corpus, queries, qrels, oracle, out_path;
  std::string ns = "10,100";
  std::string reps = "1,5,10,15,20", k_sims = "2,3,4,5,6", d_projs = "8,16,32,64";
  FdeFlags fde;
  std::size_t num_seeds = 10;
  std::uint64_t first_seed = 1;
  bool normalize = false;
  std::size_t threads = 1;
};

struct LoadedEval {
  Collection corpus, queries;
  Qrels qrels;
  NearestNeighbors oracle;
  EvalSet set;
};

void load_eval(const ExperimentArgs& a, LoadedEval& le) {
  le.corpus = load_collection(a.corpus, a.normalize);
  le.queries = load_collection(a.queries, a.normalize);
  le.set.corpus = le.corpus.items;
  le.set.doc_ids = le.corpus.ids;
  le.set.queries = le.queries.items;
  le.set.query_ids = le.queries.ids;
  le.set.threads = a.threads;
  if (!a.oracle.empty()) {
    le.oracle = oracle_from_run(read_run(a.oracle));
    le.set.oracle = &le.oracle;
  } else if (!a.qrels.empty()) {
    le.qrels = read_qrels(a.qrels);
    le.set.qrels = &le.qrels;
  } else {
    throw std::invalid_argument("need --qrels or --oracle");
  }
}

int run_eval_grid(const ExperimentArgs& a, std::ostream& out) {
  LoadedEval le;
  load_eval(a, le);
  const FdeConfig base = a.fde.resolve(le.corpus.items.front().dim());
  std::vector<GridPoint> grid;
  for (std::size_t r : parse_list(a.reps)) {
    for (std::size_t k : parse_list(a.k_sims)) {
      for (std::size_t d : parse_list(a.d_projs)) {
        if (d > base.dim) continue;
        grid.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k),
                        static_cast<std::uint32_t>(d)});
      }
    }
  }
  const auto ns = parse_list(a.ns);
  const auto rows = grid_search(le.set, base, grid, ns);
  Sink sink(a.out_path, out);
  sink.get() << "reps\tk_sim\td_proj\td_fde\tpareto";
  for (std::size_t n : ns) sink.get() << '\t' << rows.front().reports.front().metric << '@' << n;
  sink.get() << '\n';
  for (const GridRow& row : rows) {
    sink.get() << row.config.reps << '\t' << row.config.k_sim << '\t'
               << row.config.d_proj << '\t' << row.d_fde << '\t'
               << (row.pareto ? 1 : 0);
    for (const RecallReport& r : row.reports) {
      sink.get() << '\t' << std::fixed << std::setprecision(4) << r.value;
    }
    sink.get().unsetf(std::ios::fixed);
    sink.get() << '\n';
  }
  return 0;
}

int run_eval_variance(const ExperimentArgs& a, std::ostream& out) {
  LoadedEval le;
  load_eval(a, le);
  const FdeConfig config = a.fde.resolve(le.corpus.items.front().dim());
  const auto seeds = consecutive_seeds(a.first_seed, a.num_seeds);
  const auto ns = parse_list(a.ns);
  const auto rows = variance_study(le.set, config, seeds, ns);
  Sink sink(a.out_path, out);
  for (const VarianceRow& r : rows) {
    json j{{"n", r.n}, {"mean", r.mean}, {"stddev", r.stddev},
           {"values", r.values}, {"seeds", seeds},
           {"config", fde_config_to_kv(config)}};
    sink.get() << j.dump() << '\n';
  }
  return 0;
}

struct ThresholdArgs {
  std::vector<std::string> runs;  // name=path
  std::string qrels, oracle, thresholds = "0.8,0.9,0.95", schedule, out_path;
};

int run_eval_threshold(const ThresholdArgs& a, std::ostream& out) {
  Qrels truth;
  if (!a.oracle.empty()) {
    truth = qrels_from_oracle(oracle_from_run(read_run(a.oracle)));
  } else if (!a.qrels.empty()) {
    truth = read_qrels(a.qrels);
  } else {
    throw std::invalid_argument("need --qrels or --oracle");
  }
  std::vector<NamedRun> methods;
  for (const std::string& spec : a.runs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--run expects name=path");
    methods.push_back({spec.substr(0, eq), read_run(spec.substr(eq + 1)).ranking()});
  }
  const auto schedule =
      a.schedule.empty() ? default_candidate_schedule() : parse_list(a.schedule);
  const auto thresholds = parse_real_list(a.thresholds);
  const auto rows = candidates_to_threshold(methods, truth, thresholds, schedule);
  Sink sink(a.out_path, out);
  sink.get() << "method\tthreshold\tcandidates\trecall\n";
  for (const ThresholdRow& r : rows) {
    sink.get() << r.method << '\t' << r.threshold << '\t'
               << (r.candidates ? std::to_string(*r.candidates) : "not_reached")
               << '\t' << r.recall_at_candidates << '\n';
  }
  return 0;
}

struct BaselineArgs {
  std::string corpus, queries, out_path;
  std::size_t k = 10;
  bool dedup = false;
  bool normalize = false;
  std::size_t threads = 1;
};

int run_baseline_sv(const BaselineArgs& a, std::ostream& out) {
  const Collection corpus = load_collection(a.corpus, a.normalize);
  const Collection queries = load_collection(a.queries, a.normalize);
  const TokenIndex tokens = TokenIndex::build(corpus.items);
  RunFile run;
  run.header = {{"mode", "sv"},
                {"k_per_query", std::to_string(a.k)},
                {"dedup", a.dedup ? "true" : "false"}};
  std::vector<std::vector<DocId>> lists(queries.items.size());
  std::vector<SvScanStats> stats(queries.items.size());
  parallel_for(queries.items.size(), a.threads, [&](std::size_t i) {
    lists[i] = sv_candidates(queries.items[i], tokens, a.k, a.dedup, &stats[i]);
  });
  std::uint64_t floats = 0;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    floats += stats[i].floats_scanned;
    // Non-deduplicated lists can repeat a doc; a run lists it at every rank.
    for (std::size_t r = 0; r < lists[i].size(); ++r) {
      run.entries.push_back({queries.ids[i], corpus.ids[lists[i][r]], r + 1,
                             -static_cast<double>(r + 1)});
    }
  }
  run.header["floats_scanned"] = std::to_string(floats);
  Sink sink(a.out_path, out);
  write_run(sink.get(), run);
  return 0;
}

int run_baseline_exact(const BaselineArgs& a, std::ostream& out) {
  const Collection corpus = load_collection(a.corpus, a.normalize);
  const Collection queries = load_collection(a.queries, a.normalize);
  RunFile run;
  run.header = {{"mode", "exact_chamfer"}, {"k", std::to_string(a.k)}};
  std::vector<std::vector<ScoredDoc>> hits(queries.items.size());
  parallel_for(queries.items.size(), a.threads, [&](std::size_t i) {
    hits[i] = brute_force_topk(queries.items[i], corpus.items, a.k);
  });
  for (std::size_t i = 0; i < hits.size(); ++i) {
    for (std::size_t r = 0; r < hits[i].size(); ++r) {
      run.entries.push_back({queries.ids[i], corpus.ids[hits[i][r].id], r + 1,
                             hits[i][r].score});
    }
  }
  Sink sink(a.out_path, out);
  write_run(sink.get(), run);
  return 0;
}

int run_inspect(const std::string& path, std::ostream& out) {
  const std::string bytes = detail::read_file(path);
  const std::string_view magic = std::string_view(bytes).substr(0, 4);
  if (magic == "MVEC") {
    const auto recs = decode_mvec(bytes);
    std::size_t tokens = 0;
    for (const auto& r : recs) tokens += r.vectors.rows();
    out << "format = MVEC\nversion = " << kMvecVersion
        << "\ndim = " << recs.front().vectors.dim() << "\ncount = " << recs.size()
        << "\ntotal_tokens = " << tokens << '\n';
    return 0;
  }
  if (magic == "MVIX") {
    const FdeIndex index = decode_index(bytes);
    out << "format = MVIX\nversion = " << kIndexVersion << '\n';
    write_kv(out, fde_header(index.config(), index.fingerprint()));
    out << "num_docs = " << index.size() << '\n'
        << "payload_bytes_per_doc = " << index.payload_bytes_per_doc() << '\n'
        << "pq = " << (index.compressed() ? "true" : "false") << '\n';
    if (index.compressed()) {
      out << "pq_centers = " << index.pq_spec()->centers << '\n'
          << "pq_group = " << index.pq_spec()->group_width << '\n'
          << "pq_seed = " << index.pq_spec()->seed << '\n';
    }
    return 0;
  }
  std::istringstream in(bytes);
  const RunFile run = read_run(in);
  if (run.entries.empty() && run.header.empty()) {
    throw FormatError(path + ": unrecognized file");
  }
  out << "format = run\nentries = " << run.entries.size()
      << "\nqueries = " << run.ranking().size() << '\n';
  write_kv(out, run.header);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Multi-vector retrieval with fixed dimensional encodings", "muvera"};
  app.require_subcommand(1);

  std::size_t threads = 1;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus, queries and qrels");
  std::string synth_spec, synth_out = ".";
  std::vector<std::string> synth_sets;
  synth->add_option("--spec", synth_spec, "key = value SynthSpec file");
  synth->add_option("--set", synth_sets, "override a spec key (key=value)");
  synth->add_option("--out-dir", synth_out, "output directory");

  // import
  auto* import = app.add_subcommand("import", "convert text embeddings to MVEC");
  std::string import_text_path, import_out;
  bool import_norm = false;
  import->add_option("--text", import_text_path, "text file: id v1 ... vd per line")->required();
  import->add_option("--out", import_out, "output .mvec")->required();
  import->add_flag("--normalize", import_norm, "L2-normalize every token");

  // build
  auto* build = app.add_subcommand("build", "build an FDE index from an MVEC corpus");
  BuildArgs ba;
  build->add_option("--corpus", ba.corpus, "corpus .mvec")->required();
  build->add_option("--out", ba.out_path, "output index path")->required();
  ba.fde.attach(build);
  build->add_flag("--pq", ba.pq, "compress FDEs with product quantization");
  build->add_option("--pq-centers", ba.pq_centers, "PQ centers per group (C)");
  build->add_option("--pq-group", ba.pq_group, "PQ group width (G)");
  build->add_option("--pq-seed", ba.pq_seed, "PQ training seed");
  build->add_flag("--normalize", ba.normalize, "L2-normalize tokens on read");
  build->add_flag("--kmeans-full-corpus", ba.kmeans_full,
                  "train k-means on every corpus token instead of a sample");

  // query
  auto* qry = app.add_subcommand("query", "retrieve with an FDE index");
  QueryArgs qa;
  qry->add_option("--index", qa.index, "index path")->required();
  qry->add_option("--corpus", qa.corpus, "corpus .mvec used for reranking");
  qry->add_option("--queries", qa.queries, "queries .mvec")->required();
  qry->add_option("--out", qa.out_path, "run file (default stdout)");
  qry->add_option("--k-candidates", qa.k_candidates, "candidates from the FDE stage")
      ->check(CLI::PositiveNumber);
  qry->add_option("--final-k", qa.final_k, "results after rerank")->check(CLI::PositiveNumber);
  qry->add_option("--carve-tau", qa.carve_tau, "ball carving threshold for rerank");
  qry->add_flag("--fde-only", qa.fde_only, "emit the FDE ranking without rerank");
  qry->add_flag("--normalize", qa.normalize, "L2-normalize tokens on read");

  // eval
  auto* eval = app.add_subcommand("eval", "recall reports and experiments");
  eval->require_subcommand(1);
  auto* ev_recall = eval->add_subcommand("recall", "Recall@N / 1Recall@N of a run");
  EvalArgs ea;
  ev_recall->add_option("--run", ea.run, "run file")->required();
  ev_recall->add_option("--qrels", ea.qrels, "qrels TSV");
  ev_recall->add_option("--oracle", ea.oracle, "exact Chamfer run (rank 1 used)");
  ev_recall->add_option("--n", ea.ns, "comma-separated N list");
  ev_recall->add_option("--format", ea.format, "jsonl | table")
      ->check(CLI::IsMember({"jsonl", "table"}));
  ev_recall->add_option("--out", ea.out_path, "output path (default stdout)");

  ExperimentArgs xa;
  auto attach_experiment = [&](CLI::App* sub) {
    sub->add_option("--corpus", xa.corpus, "corpus .mvec")->required();
    sub->add_option("--queries", xa.queries, "queries .mvec")->required();
    sub->add_option("--qrels", xa.qrels, "qrels TSV");
    sub->add_option("--oracle", xa.oracle, "exact Chamfer run for 1Recall");
    sub->add_option("--n", xa.ns, "comma-separated N list");
    sub->add_option("--out", xa.out_path, "output path (default stdout)");
    sub->add_flag("--normalize", xa.normalize, "L2-normalize tokens on read");
    xa.fde.attach(sub);
  };
  auto* ev_grid = eval->add_subcommand("grid", "grid search over (reps, k_sim, d_proj)");
  attach_experiment(ev_grid);
  ev_grid->add_option("--grid-reps", xa.reps, "comma-separated reps values");
  ev_grid->add_option("--grid-k-sim", xa.k_sims, "comma-separated k_sim values");
  ev_grid->add_option("--grid-d-proj", xa.d_projs, "comma-separated d_proj values");
  auto* ev_var = eval->add_subcommand("variance", "recall mean/std across FDE seeds");
  attach_experiment(ev_var);
  ev_var->add_option("--num-seeds", xa.num_seeds, "number of seeds (>= 2)");
  ev_var->add_option("--first-seed", xa.first_seed, "first seed");

  auto* ev_thr = eval->add_subcommand("threshold", "candidates needed to reach recall levels");
  ThresholdArgs ta;
  ev_thr->add_option("--run", ta.runs, "name=path, repeatable")->required();
  ev_thr->add_option("--qrels", ta.qrels, "qrels TSV");
  ev_thr->add_option("--oracle", ta.oracle, "exact Chamfer run for 1Recall");
  ev_thr->add_option("--thresholds", ta.thresholds, "comma-separated recall levels");
  ev_thr->add_option("--schedule", ta.schedule, "comma-separated N schedule");
  ev_thr->add_option("--out", ta.out_path, "output path (default stdout)");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "reference retrieval runs");
  baseline->require_subcommand(1);
  BaselineArgs bla;
  auto attach_baseline = [&](CLI::App* sub) {
    sub->add_option("--corpus", bla.corpus, "corpus .mvec")->required();
    sub->add_option("--queries", bla.queries, "queries .mvec")->required();
    sub->add_option("--out", bla.out_path, "run file (default stdout)");
    sub->add_flag("--normalize", bla.normalize, "L2-normalize tokens on read");
  };
  auto* bl_sv = baseline->add_subcommand("sv", "single-vector heuristic candidates");
  attach_baseline(bl_sv);
  bl_sv->add_option("--k-per-query", bla.k, "neighbors per query token")
      ->check(CLI::PositiveNumber);
  bl_sv->add_flag("--dedup", bla.dedup, "drop repeated doc ids");
  auto* bl_exact = baseline->add_subcommand("exact", "brute-force Chamfer top-k");
  attach_baseline(bl_exact);
  bl_exact->add_option("--k", bla.k, "results per query")->check(CLI::PositiveNumber);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print the header of an artifact");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "MVEC, MVIX or run file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  ba.threads = qa.threads = xa.threads = bla.threads = threads;
  try {
    if (*synth) return run_synth(synth_spec, synth_sets, synth_out, out);
    if (*import) return run_import(import_text_path, import_out, import_norm, out);
    if (*build) return run_build(ba, out);
    if (*qry) return run_query(qa, out);
    if (*ev_recall) return run_eval_recall(ea, out);
    if (*ev_grid) return run_eval_grid(xa, out);
    if (*ev_var) return run_eval_variance(xa, out);
    if (*ev_thr) return run_eval_threshold(ta, out);
    if (*bl_sv) return run_baseline_sv(bla, out);
    if (*bl_exact) return run_baseline_exact(bla, out);
    if (*inspect) return run_inspect(inspect_path, out);
  } catch (const std::exception& e) {
    err << "muvera: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace muvera::cli
