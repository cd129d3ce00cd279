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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace muvera {

using DocId = std::uint64_t;
using QueryId = std::uint64_t;

// Randomness purposes. Every random object is keyed by (seed, rep, purpose)
// so query and document encoders built from one config share their draws.
enum class Purpose : std::uint64_t {
  kHyperplanes = 1,
  kInnerProjection = 2,
  kFinalProjection = 3,
  kKMeansInit = 4,
  kPqSample = 5,
  kPqGroup = 6,
  kSynth = 7,
};

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t rep,
                                          Purpose purpose) {
  return mix64(mix64(mix64(seed) ^ rep) ^ static_cast<std::uint64_t>(purpose));
}

// FNV-1a, used for config and artifact fingerprints.
class Fingerprint {
 public:
  void add_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void add(const T& value) {
    add_bytes(&value, sizeof(T));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

template <typename T, typename U>
inline double dot(std::span<const T> a, std::span<const U> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: size mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

template <typename T, typename U>
inline double squared_distance(std::span<const T> a, std::span<const U> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += diff * diff;
  }
  return acc;
}

template <typename T>
inline double norm(std::span<const T> a) {
  return std::sqrt(dot(a, a));
}

// A scored document. Rankings order by descending score, then ascending id.
struct ScoredDoc {
  DocId id = 0;
  double score = 0.0;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

// Top-k of scores[i] for ids 0..n-1, ranked by ranks_before.
inline std::vector<ScoredDoc> top_k(std::span<const double> scores,
                                    std::size_t k) {
  std::vector<ScoredDoc> all(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    all[i] = {static_cast<DocId>(i), scores[i]};
  }
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                    all.end(), ranks_before);
  all.resize(k);
  return all;
}

inline std::vector<ScoredDoc> top_k(std::vector<ScoredDoc> candidates,
                                    std::size_t k) {
  k = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(),
                    candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), ranks_before);
  candidates.resize(k);
  return candidates;
}

}  // namespace muvera
