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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "muvera/kmeans.hpp"
#include "muvera/partition.hpp"
#include "muvera/projection.hpp"
#include "test_util.hpp"

namespace muvera {
namespace {

using testing::random_unit;
using testing::random_vector;

TEST(SimHashTest, BitOrderIsLsbFirst) {
  // g_1 = e_1, g_2 = e_2, g_3 = -e_1
  const auto p = SimHashPartitioner::from_hyperplanes(
      3, 2, {1.0, 0.0, 0.0, 1.0, -1.0, 0.0});
  EXPECT_EQ(p.assign(std::span<const double>(std::vector<double>{1, 0})).value, 0b001u);
  EXPECT_EQ(p.assign(std::span<const double>(std::vector<double>{0.5, 1})).value, 0b011u);
  EXPECT_EQ(p.assign(std::span<const double>(std::vector<double>{-1, 1})).value, 0b110u);
  // zero dot is not > 0
  EXPECT_EQ(p.assign(std::span<const double>(std::vector<double>{0, 0})).value, 0u);
}

TEST(SimHashTest, AntipodalPointsGetComplementaryIds) {
  std::mt19937_64 rng(11);
  for (std::uint32_t k : {1u, 3u, 6u, 10u}) {
    const auto p = SimHashPartitioner::create(k, 16, rng(), 0);
    EXPECT_EQ(p.num_clusters(), 1u << k);
    for (int t = 0; t < 50; ++t) {
      auto x = random_vector(rng, 16);
      auto y = x;
      for (double& v : y) v = -v;
      const auto a = p.assign(std::span<const double>(x));
      const auto b = p.assign(std::span<const double>(y));
      EXPECT_EQ(a.value + b.value, (1u << k) - 1);
      EXPECT_EQ(hamming(a, b), k);
    }
  }
}

TEST(SimHashTest, ScaleInvariantAndDeterministic) {
  const auto p = SimHashPartitioner::create(5, 8, 42, 3);
  const auto q = SimHashPartitioner::create(5, 8, 42, 3);
  EXPECT_TRUE(p == q);
  EXPECT_FALSE(p == SimHashPartitioner::create(5, 8, 42, 4));
  std::mt19937_64 rng(12);
  auto x = random_vector(rng, 8);
  auto y = x;
  for (double& v : y) v *= 3.5;
  EXPECT_EQ(p.assign(std::span<const double>(x)), p.assign(std::span<const double>(y)));
}

TEST(SimHashTest, CollisionRateMatchesAngle) {
  // Single hyperplane: P[different side] = theta / pi.
  std::mt19937_64 rng(13);
  const std::size_t d = 16;
  for (double theta : {0.3, 1.0, 2.0}) {
    std::vector<double> x(d, 0.0), y(d, 0.0);
    x[0] = 1.0;
    y[0] = std::cos(theta);
    y[1] = std::sin(theta);
    int split = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      const auto p = SimHashPartitioner::create(1, d, 77, t);
      split += p.assign(std::span<const double>(x)) != p.assign(std::span<const double>(y));
    }
    EXPECT_NEAR(double(split) / trials, theta / std::numbers::pi, 0.02) << theta;
  }
}

TEST(SimHashTest, RejectsBadArguments) {
  EXPECT_THROW(SimHashPartitioner::create(0, 4, 1, 0), std::invalid_argument);
  EXPECT_THROW(SimHashPartitioner::create(25, 4, 1, 0), std::invalid_argument);
  EXPECT_THROW(SimHashPartitioner::create(3, 0, 1, 0), std::invalid_argument);
  EXPECT_THROW(SimHashPartitioner::from_hyperplanes(2, 3, std::vector<double>(5)),
               std::invalid_argument);
  const auto p = SimHashPartitioner::create(3, 4, 1, 0);
  EXPECT_THROW(p.assign(std::span<const double>(std::vector<double>(5))),
               std::invalid_argument);
}

TEST(HammingTest, CountsDifferingBits) {
  EXPECT_EQ(hamming(ClusterId{0b1010}, ClusterId{0b0110}), 2u);
  EXPECT_EQ(hamming(ClusterId{7}, ClusterId{7}), 0u);
}

std::vector<float> blobs(std::mt19937_64& rng, std::size_t per_blob,
                         const std::vector<std::vector<float>>& centers,
                         double spread) {
  std::normal_distribution<double> g(0.0, spread);
  std::vector<float> out;
  for (const auto& c : centers) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (float v : c) out.push_back(static_cast<float>(v + g(rng)));
    }
  }
  return out;
}

TEST(KMeansTest, RecoversSeparatedBlobs) {
  std::mt19937_64 rng(21);
  const std::vector<std::vector<float>> centers = {
      {10, 0}, {-10, 0}, {0, 10}, {0, -10}};
  const auto data = blobs(rng, 50, centers, 0.5);
  const std::size_t n = data.size() / 2;
  // a few seeds: with distinct-point init, Lloyd can still merge two blobs
  int recovered = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = lloyd_kmeans(data, n, 2, 4, seed);
    ASSERT_EQ(r.k, 4u);
    std::set<std::size_t> owners;
    for (const auto& c : centers) {
      owners.insert(detail::nearest_center(std::span<const float>(c),
                                           std::span<const float>(r.centers), 4, 2));
    }
    recovered += owners.size() == 4;
  }
  EXPECT_GE(recovered, 3);
}

TEST(KMeansTest, MseNeverIncreases) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  std::vector<float> data(600 * 5);
  for (float& v : data) v = static_cast<float>(g(rng));
  KMeansOptions opts;
  opts.tol = 0.0;
  opts.max_iters = 30;
  const auto r = lloyd_kmeans(data, 600, 5, 12, 3, opts);
  ASSERT_GE(r.mse_history.size(), 2u);
  for (std::size_t i = 1; i < r.mse_history.size(); ++i) {
    EXPECT_LE(r.mse_history[i], r.mse_history[i - 1] * (1 + 1e-12));
  }
}

TEST(KMeansTest, FewDistinctPointsShrinkK) {
  const std::vector<float> data = {1, 1, 1, 1, 2, 2, 1, 1, 2, 2, -0.0f, 0, 0, 0};
  const auto r = lloyd_kmeans(data, 7, 2, 10, 1);
  EXPECT_EQ(r.k, 3u);
  EXPECT_DOUBLE_EQ(r.mse_history.back(), 0.0);
}

TEST(KMeansTest, DeterministicForSeed) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  std::vector<float> data(200 * 3);
  for (float& v : data) v = static_cast<float>(g(rng));
  const auto a = lloyd_kmeans(data, 200, 3, 8, 99);
  const auto b = lloyd_kmeans(data, 200, 3, 8, 99);
  EXPECT_EQ(a.centers, b.centers);
}

TEST(KMeansPartitionerTest, AssignsNearestCenterWithLowIndexTies) {
  const KMeansPartitioner p(2, {0, 0, 2, 0, 0, 2});
  EXPECT_EQ(p.num_clusters(), 3u);
  EXPECT_EQ(p.assign(std::span<const double>(std::vector<double>{1.9, 0.1})).value, 1u);
  // equidistant from centers 0 and 1
  EXPECT_EQ(p.assign(std::span<const double>(std::vector<double>{1, 0})).value, 0u);
  EXPECT_THROW(KMeansPartitioner(2, {0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(KMeansPartitioner(2, {0, NAN}), std::invalid_argument);
}

TEST(KMeansPartitionerTest, TrainUsesEffectiveCount) {
  const std::vector<float> pts = {1, 0, 1, 0, 0, 1};
  const auto p = kmeans_train(pts, 3, 2, 8, 5);
  EXPECT_EQ(p.num_clusters(), 2u);
  EXPECT_THROW(kmeans_train(std::span<const float>(), 0, 2, 4, 1), std::invalid_argument);
}

TEST(SignProjectionTest, EntriesAreBalancedSigns) {
  const SignProjection s(64, 200, 1234);
  int plus = 0;
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 200; ++c) {
      const int e = s.entry(r, c);
      ASSERT_TRUE(e == 1 || e == -1);
      plus += e == 1;
    }
  }
  EXPECT_NEAR(plus / (64.0 * 200.0), 0.5, 0.02);
}

TEST(SignProjectionTest, ApplyMatchesExplicitMatrix) {
  const SignProjection s(10, 7, 99);
  std::mt19937_64 rng(31);
  auto x = random_vector(rng, 7);
  x[3] = 0.0;
  const auto y = s.apply(std::span<const double>(x));
  ASSERT_EQ(y.size(), 10u);
  for (std::size_t r = 0; r < 10; ++r) {
    double expect = 0.0;
    for (std::size_t c = 0; c < 7; ++c) expect += s.entry(r, c) * x[c];
    EXPECT_NEAR(y[r], expect / std::sqrt(10.0), 1e-12);
  }
}

TEST(SignProjectionTest, PreservesDotProductsOnAverage) {
  std::mt19937_64 rng(32);
  const auto x = random_vector(rng, 24);
  const auto y = random_vector(rng, 24);
  double truth = 0.0;
  for (std::size_t i = 0; i < 24; ++i) truth += x[i] * y[i];
  std::vector<double> samples;
  for (std::uint64_t key = 0; key < 2000; ++key) {
    const SignProjection s(6, 24, mix64(key + 1));
    const auto px = s.apply(std::span<const double>(x));
    const auto py = s.apply(std::span<const double>(y));
    double v = 0.0;
    for (std::size_t i = 0; i < 6; ++i) v += px[i] * py[i];
    samples.push_back(v);
  }
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= samples.size();
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (samples.size() - 1)) / std::sqrt(double(samples.size()));
  EXPECT_LT(std::abs(mean - truth), 4 * se);
}

}  // namespace
}  // namespace muvera
