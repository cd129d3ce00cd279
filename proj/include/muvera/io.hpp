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

// File formats. All binary values are little-endian fixed width.
//
// MVEC (multi-vector embeddings):
//   "MVEC" | u32 version=1 | u32 dim | u64 count
//   count x ( u64 id | u32 num_tokens | num_tokens*dim f32 )
//
// MVIX (FDE index):
//   "MVIX" | u32 version=1 | config | u64 fingerprint
//   partitioners (simhash: reps*k_sim*dim f64; kmeans: reps*B*dim f32)
//   u8 has_pq [ u32 C | u32 G | u64 seed | u64 sample_limit |
//               u32 groups | groups x ( u32 centers | centers*G f32 ) ]
//   u64 n | n x u64 id | payload (n*dim f32, or n*groups u8 codes)
//
// Text formats: qrels `query_id<TAB>doc_id<TAB>grade`, runs
// `query_id<TAB>doc_id<TAB>rank<TAB>score` with `# key=value` header lines,
// and flat `key = value` config files.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "muvera/common.hpp"
#include "muvera/eval.hpp"
#include "muvera/fde.hpp"
#include "muvera/index.hpp"
#include "muvera/multivector.hpp"
#include "muvera/pq.hpp"

namespace muvera {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
            std::conditional_t<sizeof(T) == 4, std::uint32_t,
            std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xff));
    if constexpr (sizeof(T) > 1) bits >>= 8;
  }
}

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  template <typename T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    need(sizeof(T));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i]))
              << (8 * i);
    }
    pos_ += sizeof(T);
    return std::bit_cast<T>(bits);
  }

  std::string_view take(std::size_t n) {
    need(n);
    std::string_view v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(what_ + ": truncated at byte offset " +
                        std::to_string(pos_) + ": need " + std::to_string(n) +
                        " more bytes, expected length >= " +
                        std::to_string(pos_ + n) + ", actual length " +
                        std::to_string(bytes_.size()));
    }
  }

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(what_ + ": " + msg + " at byte offset " +
                      std::to_string(pos_));
  }

 private:
  std::string_view bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline void check_magic(ByteReader& r, std::string_view magic) {
  if (r.remaining() < magic.size() || r.take(magic.size()) != magic) {
    throw FormatError("bad magic: expected \"" + std::string(magic) + "\"");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// MVEC

inline constexpr std::uint32_t kMvecVersion = 1;
inline constexpr std::uint32_t kIndexVersion = 1;

struct MvecRecord {
  std::uint64_t id = 0;
  MultiVector vectors;

  friend bool operator==(const MvecRecord&, const MvecRecord&) = default;
};

inline std::string encode_mvec(std::span<const MvecRecord> records) {
  if (records.empty()) throw std::invalid_argument("write_mvec: no records");
  const std::size_t dim = records.front().vectors.dim();
  std::string out = "MVEC";
  detail::put_le<std::uint32_t>(out, kMvecVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  detail::put_le<std::uint64_t>(out, records.size());
  for (const MvecRecord& r : records) {
    if (r.vectors.dim() != dim) {
      throw std::invalid_argument("write_mvec: mixed dimensions");
    }
    detail::put_le<std::uint64_t>(out, r.id);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(r.vectors.rows()));
    for (float v : r.vectors.data()) detail::put_le<float>(out, v);
  }
  return out;
}

inline std::vector<MvecRecord> decode_mvec(std::string_view bytes,
                                           bool normalize = false) {
  detail::ByteReader r(bytes, "MVEC");
  detail::check_magic(r, "MVEC");
  const auto version = r.get<std::uint32_t>();
  if (version != kMvecVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  const auto dim = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  if (dim == 0) r.fail("dim must be >= 1");
  std::vector<MvecRecord> records;
  for (std::uint64_t i = 0; i < count; ++i) {
    MvecRecord rec;
    rec.id = r.get<std::uint64_t>();
    const auto tokens = r.get<std::uint32_t>();
    if (tokens == 0) r.fail("record " + std::to_string(i) + " has no tokens");
    r.need(static_cast<std::size_t>(tokens) * dim * sizeof(float));
    std::vector<float> data(static_cast<std::size_t>(tokens) * dim);
    for (float& v : data) v = r.get<float>();
    rec.vectors = MultiVector(dim, std::move(data));
    if (normalize) rec.vectors.normalize();
    records.push_back(std::move(rec));
  }
  if (r.remaining() != 0) {
    r.fail(std::to_string(r.remaining()) + " trailing bytes after " +
           std::to_string(count) + " records");
  }
  return records;
}

inline void write_mvec(const std::filesystem::path& path,
                       std::span<const MvecRecord> records) {
  detail::write_file(path, encode_mvec(records));
}

inline std::vector<MvecRecord> read_mvec(const std::filesystem::path& path,
                                         bool normalize = false) {
  try {
    return decode_mvec(detail::read_file(path), normalize);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

struct Collection {
  std::vector<std::uint64_t> ids;
  std::vector<MultiVector> items;
};

inline Collection split_records(std::vector<MvecRecord> records) {
  Collection c;
  for (MvecRecord& r : records) {
    c.ids.push_back(r.id);
    c.items.push_back(std::move(r.vectors));
  }
  return c;
}

/// One-way text import: each line is `id v1 v2 ... vd` (tabs or spaces);
/// lines sharing an id form one record, in order of first appearance.
inline std::vector<MvecRecord> import_text(std::istream& in) {
  std::vector<std::uint64_t> order;
  std::map<std::uint64_t, std::vector<float>> rows;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t id = 0;
    if (!(ls >> id)) {
      throw FormatError("text import: line " + std::to_string(lineno) +
                        ": missing id");
    }
    std::vector<float> vals;
    double v = 0.0;
    while (ls >> v) vals.push_back(static_cast<float>(v));
    if (!ls.eof()) {
      throw FormatError("text import: line " + std::to_string(lineno) +
                        ": bad number");
    }
    if (vals.empty() || (dim != 0 && vals.size() != dim)) {
      throw FormatError("text import: line " + std::to_string(lineno) +
                        ": expected " + std::to_string(dim) + " values, got " +
                        std::to_string(vals.size()));
    }
    dim = vals.size();
    auto [it, inserted] = rows.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.insert(it->second.end(), vals.begin(), vals.end());
  }
  std::vector<MvecRecord> out;
  for (std::uint64_t id : order) {
    out.push_back({id, MultiVector(dim, std::move(rows[id]))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// MVIX

inline std::string encode_index(const FdeIndex& index) {
  const FdeConfig& c = index.config();
  std::string out = "MVIX";
  detail::put_le<std::uint32_t>(out, kIndexVersion);
  detail::put_le<std::uint32_t>(out, c.dim);
  detail::put_le<std::uint32_t>(out, c.k_sim);
  detail::put_le<std::uint32_t>(out, c.d_proj);
  detail::put_le<std::uint32_t>(out, c.reps);
  detail::put_le<std::uint32_t>(out, c.d_final.value_or(0));
  detail::put_le<std::uint8_t>(out, c.fill_empty ? 1 : 0);
  detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(c.partitioner));
  detail::put_le<std::uint32_t>(out, c.num_centers);
  detail::put_le<std::uint64_t>(out, c.seed);
  detail::put_le<std::uint64_t>(out, index.fingerprint());
  for (const Partitioner& p : index.encoder().partitioners()) {
    if (const auto* s = std::get_if<SimHashPartitioner>(&p)) {
      for (double g : s->gaussians()) detail::put_le<double>(out, g);
    } else {
      for (float v : std::get<KMeansPartitioner>(p).centers()) {
        detail::put_le<float>(out, v);
      }
    }
  }
  detail::put_le<std::uint8_t>(out, index.compressed() ? 1 : 0);
  if (index.compressed()) {
    const PqSpec& spec = *index.pq_spec();
    const PqCodebook& cb = index.codebook();
    detail::put_le<std::uint32_t>(out, spec.centers);
    detail::put_le<std::uint32_t>(out, spec.group_width);
    detail::put_le<std::uint64_t>(out, spec.seed);
    detail::put_le<std::uint64_t>(out, spec.sample_limit);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cb.num_groups()));
    for (std::size_t g = 0; g < cb.num_groups(); ++g) {
      detail::put_le<std::uint32_t>(out,
                                    static_cast<std::uint32_t>(cb.centers_in_group(g)));
      for (float v : cb.groups()[g]) detail::put_le<float>(out, v);
    }
  }
  detail::put_le<std::uint64_t>(out, index.size());
  for (DocId id : index.ids()) detail::put_le<std::uint64_t>(out, id);
  if (index.compressed()) {
    out.append(reinterpret_cast<const char*>(index.code_payload().data()),
               index.code_payload().size());
  } else {
    for (float v : index.dense_payload()) detail::put_le<float>(out, v);
  }
  return out;
}

struct IndexHeader {
  FdeConfig config;
  std::uint64_t fingerprint = 0;
};

inline IndexHeader decode_index_header(detail::ByteReader& r) {
  detail::check_magic(r, "MVIX");
  const auto version = r.get<std::uint32_t>();
  if (version != kIndexVersion) {
    r.fail("unsupported index version " + std::to_string(version));
  }
  IndexHeader h;
  FdeConfig& c = h.config;
  c.dim = r.get<std::uint32_t>();
  c.k_sim = r.get<std::uint32_t>();
  c.d_proj = r.get<std::uint32_t>();
  c.reps = r.get<std::uint32_t>();
  if (const auto f = r.get<std::uint32_t>(); f != 0) c.d_final = f;
  c.fill_empty = r.get<std::uint8_t>() != 0;
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) r.fail("unknown partitioner kind " + std::to_string(kind));
  c.partitioner = static_cast<PartitionerKind>(kind);
  c.num_centers = r.get<std::uint32_t>();
  c.seed = r.get<std::uint64_t>();
  h.fingerprint = r.get<std::uint64_t>();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(std::string("invalid config: ") + e.what());
  }
  return h;
}

inline FdeIndex decode_index(std::string_view bytes) {
  detail::ByteReader r(bytes, "MVIX");
  const IndexHeader h = decode_index_header(r);
  const FdeConfig& c = h.config;

  std::vector<Partitioner> parts;
  for (std::uint32_t rep = 0; rep < c.reps; ++rep) {
    if (c.partitioner == PartitionerKind::kSimHash) {
      std::vector<double> g(static_cast<std::size_t>(c.k_sim) * c.dim);
      r.need(g.size() * sizeof(double));
      for (double& v : g) v = r.get<double>();
      parts.emplace_back(SimHashPartitioner::from_hyperplanes(c.k_sim, c.dim, std::move(g)));
    } else {
      std::vector<float> centers(static_cast<std::size_t>(c.num_centers) * c.dim);
      r.need(centers.size() * sizeof(float));
      for (float& v : centers) v = r.get<float>();
      parts.emplace_back(KMeansPartitioner(c.dim, std::move(centers)));
    }
  }
  FdeEncoder encoder(c, std::move(parts));
  if (encoder.fingerprint() != h.fingerprint) {
    r.fail("config fingerprint mismatch (stored " + std::to_string(h.fingerprint) +
           ", recomputed " + std::to_string(encoder.fingerprint()) + ")");
  }

  const bool has_pq = r.get<std::uint8_t>() != 0;
  std::optional<PqSpec> spec;
  std::optional<PqCodebook> codebook;
  const std::size_t dim = encoder.output_dim();
  if (has_pq) {
    PqSpec s;
    s.centers = r.get<std::uint32_t>();
    s.group_width = r.get<std::uint32_t>();
    s.seed = r.get<std::uint64_t>();
    s.sample_limit = r.get<std::uint64_t>();
    const auto groups = r.get<std::uint32_t>();
    std::vector<std::vector<float>> centers(groups);
    for (auto& g : centers) {
      const auto n = r.get<std::uint32_t>();
      if (n == 0 || n > 256) r.fail("bad PQ group center count");
      g.resize(static_cast<std::size_t>(n) * s.group_width);
      r.need(g.size() * sizeof(float));
      for (float& v : g) v = r.get<float>();
    }
    spec = s;
    try {
      codebook.emplace(dim, s.group_width, std::move(centers));
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }
  const auto n = r.get<std::uint64_t>();
  r.need(n * sizeof(std::uint64_t));
  std::vector<DocId> ids(n);
  for (DocId& id : ids) id = r.get<std::uint64_t>();

  if (has_pq) {
    const std::size_t bytes_needed = n * codebook->code_bytes();
    const std::string_view raw = r.take(bytes_needed);
    std::vector<std::uint8_t> codes(raw.begin(), raw.end());
    if (r.remaining() != 0) r.fail("trailing bytes");
    return FdeIndex(std::move(encoder), std::move(ids), *spec,
                    std::move(*codebook), std::move(codes));
  }
  r.need(n * dim * sizeof(float));
  std::vector<float> dense(n * dim);
  for (float& v : dense) v = r.get<float>();
  if (r.remaining() != 0) r.fail("trailing bytes");
  return FdeIndex(std::move(encoder), std::move(ids), std::move(dense));
}

inline void write_index(const std::filesystem::path& path, const FdeIndex& index) {
  detail::write_file(path, encode_index(index));
}

inline FdeIndex read_index(const std::filesystem::path& path) {
  try {
    return decode_index(detail::read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Key-value config text

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline KeyValues parse_kv(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    kv[trim(std::string_view(t).substr(0, eq))] =
        trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

inline KeyValues read_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_kv(in);
}

namespace detail {

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || v[0] == '-') {
    throw std::invalid_argument("config key '" + key + "': not an unsigned integer: " + v);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) {
    throw std::invalid_argument("config key '" + key + "': not a number: " + v);
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("config key '" + key + "': not a boolean: " + v);
}

}  // namespace detail

/// Applies recognized FDE keys; returns keys it did not recognize.
inline std::vector<std::string> apply_fde_keys(FdeConfig& c, const KeyValues& kv) {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : kv) {
    if (k == "dim") c.dim = static_cast<std::uint32_t>(detail::parse_u64(k, v));
    else if (k == "k_sim") c.k_sim = static_cast<std::uint32_t>(detail::parse_u64(k, v));
    else if (k == "d_proj") c.d_proj = static_cast<std::uint32_t>(detail::parse_u64(k, v));
    else if (k == "reps") c.reps = static_cast<std::uint32_t>(detail::parse_u64(k, v));
    else if (k == "d_final") {
      const auto f = detail::parse_u64(k, v);
      if (f == 0) c.d_final.reset();
      else c.d_final = static_cast<std::uint32_t>(f);
    } else if (k == "fill_empty") c.fill_empty = detail::parse_bool(k, v);
    else if (k == "partitioner") {
      if (v == "simhash") c.partitioner = PartitionerKind::kSimHash;
      else if (v == "kmeans") c.partitioner = PartitionerKind::kKMeans;
      else throw std::invalid_argument("config key 'partitioner': " + v);
    } else if (k == "num_centers") {
      c.num_centers = static_cast<std::uint32_t>(detail::parse_u64(k, v));
    } else if (k == "seed") c.seed = detail::parse_u64(k, v);
    else unknown.push_back(k);
  }
  return unknown;
}

inline KeyValues fde_config_to_kv(const FdeConfig& c) {
  return {{"dim", std::to_string(c.dim)},
          {"k_sim", std::to_string(c.k_sim)},
          {"d_proj", std::to_string(c.d_proj)},
          {"reps", std::to_string(c.reps)},
          {"d_final", std::to_string(c.d_final.value_or(0))},
          {"fill_empty", c.fill_empty ? "true" : "false"},
          {"partitioner", to_string(c.partitioner)},
          {"num_centers", std::to_string(c.num_centers)},
          {"seed", std::to_string(c.seed)},
          {"d_fde", std::to_string(fde_dim(c))}};
}

inline void write_kv(std::ostream& out, const KeyValues& kv,
                     std::string_view prefix = "") {
  for (const auto& [k, v] : kv) out << prefix << k << " = " << v << '\n';
}

// ---------------------------------------------------------------------------
// Qrels and runs

inline Qrels read_qrels(std::istream& in) {
  Qrels q;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::uint64_t qid = 0;
    std::uint64_t doc = 0;
    int grade = 0;
    if (!(ls >> qid >> doc >> grade)) {
      if (lineno == 1) continue;  // header row
      throw FormatError("qrels line " + std::to_string(lineno) +
                        ": expected query_id<TAB>doc_id<TAB>grade");
    }
    q.add(qid, doc, grade);
  }
  return q;
}

inline Qrels read_qrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_qrels(in);
}

inline void write_qrels(std::ostream& out, const Qrels& q) {
  for (const auto& [qid, docs] : q.relevant) {
    for (const auto& [doc, grade] : docs) {
      out << qid << '\t' << doc << '\t' << grade << '\n';
    }
  }
}

struct RunEntry {
  QueryId query = 0;
  DocId doc = 0;
  std::size_t rank = 0;  // 1-based
  double score = 0.0;
};

struct RunFile {
  KeyValues header;
  std::vector<RunEntry> entries;

  Run ranking() const {
    std::map<QueryId, std::vector<std::pair<std::size_t, DocId>>> tmp;
    for (const RunEntry& e : entries) tmp[e.query].emplace_back(e.rank, e.doc);
    Run run;
    for (auto& [q, v] : tmp) {
      std::stable_sort(v.begin(), v.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& out = run[q];
      for (const auto& [rank, doc] : v) out.push_back(doc);
    }
    return run;
  }
};

inline void write_run(std::ostream& out, const RunFile& run) {
  write_kv(out, run.header, "# ");
  out << std::setprecision(17);
  for (const RunEntry& e : run.entries) {
    out << e.query << '\t' << e.doc << '\t' << e.rank << '\t' << e.score << '\n';
  }
}

inline RunFile read_run(std::istream& in) {
  RunFile run;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        run.header[trim(std::string_view(body).substr(0, eq))] =
            trim(std::string_view(body).substr(eq + 1));
      }
      continue;
    }
    std::istringstream ls(line);
    RunEntry e;
    if (!(ls >> e.query >> e.doc >> e.rank >> e.score)) {
      throw FormatError("run line " + std::to_string(lineno) +
                        ": expected query_id<TAB>doc_id<TAB>rank<TAB>score");
    }
    run.entries.push_back(e);
  }
  return run;
}

inline RunFile read_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_run(in);
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json to_json(const RecallReport& r) {
  return {{"metric", r.metric},       {"n", r.n},
          {"value", r.value},         {"query_count", r.query_count},
          {"skipped", r.skipped},     {"fingerprint", r.fingerprint},
          {"candidates", r.candidates}};
}

}  // namespace muvera
