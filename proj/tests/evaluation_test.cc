/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "footprint/evaluation.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "footprint/error.h"
#include "test_support.h"

namespace footprint::eval {
namespace {

using geometry::Pixel;

TEST(ExpansionMetricsTest, PerfectOverlap) {
  BinaryMap gt(3, 3, 0);
  gt(1, 1) = 1;
  gt(2, 0) = 1;
  const MetricsReport r = ExpansionMetrics(gt, gt);
  EXPECT_EQ(r, (MetricsReport{1.0, 1.0, 0.0, 0.0, std::nullopt, std::nullopt}));
}

TEST(ExpansionMetricsTest, AllOnesPredictionOverFourPositives) {
  BinaryMap gt(10, 10, 0);
  gt(0, 0) = gt(3, 4) = gt(7, 2) = gt(9, 9) = 1;
  const MetricsReport r = ExpansionMetrics(BinaryMap(10, 10, 1), gt);
  EXPECT_EQ(*r.pred_total, 25.0);
  EXPECT_EQ(*r.pred_valid_tp, 1.0);
  EXPECT_EQ(*r.missing_fn, 0.0);
  EXPECT_EQ(*r.expansion, 24.0);
}

TEST(ExpansionMetricsTest, IdentitiesHoldExactly) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> side(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = side(rng);
    const int cols = side(rng);
    std::bernoulli_distribution p_pred(std::uniform_real_distribution<double>(0, 1)(rng));
    std::bernoulli_distribution p_gt(std::uniform_real_distribution<double>(0, 1)(rng));
    BinaryMap pred(rows, cols, 0);
    BinaryMap gt(rows, cols, 0);
    for (std::size_t i = 0; i < gt.size(); ++i) {
      pred.at_flat(i) = p_pred(rng);
      gt.at_flat(i) = p_gt(rng);
    }
    gt.at_flat(0) = 1;
    const MetricsReport r = ExpansionMetrics(pred, gt);
    ASSERT_EQ(*r.pred_valid_tp + *r.missing_fn, 1.0);
    ASSERT_EQ(*r.pred_total, *r.pred_valid_tp + *r.expansion);
  }
}

TEST(ExpansionMetricsTest, ReferenceColumnIsConsistent) {
  // Reference column: total 8.18, valid 0.69, missing 0.31, expansion 7.48.
  EXPECT_NEAR(0.69 + 7.48, 8.18, 0.01);
  EXPECT_NEAR(0.69 + 0.31, 1.00, 1e-12);
}

TEST(ExpansionMetricsTest, Errors) {
  try {
    ExpansionMetrics(BinaryMap(2, 2, 1), BinaryMap(2, 2, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroundTruth);
  }
  EXPECT_THROW(ExpansionMetrics(BinaryMap(2, 2, 1), BinaryMap(2, 3, 1)), Error);
}

TEST(ThresholdTest, StrictlyGreater) {
  ScoreMap s(1, 3, 0.0);
  s(0, 1) = 0.5;
  s(0, 2) = 0.51;
  const BinaryMap b = Threshold(s);
  EXPECT_EQ(b(0, 0), 0);
  EXPECT_EQ(b(0, 1), 0);
  EXPECT_EQ(b(0, 2), 1);
}

TEST(AveragePrecisionTest, Fixtures) {
  ScoreMap s(1, 4, 0.0);
  s(0, 0) = 0.9;
  s(0, 1) = 0.8;
  s(0, 2) = 0.7;
  s(0, 3) = 0.6;
  BinaryMap gt(1, 4, 0);
  gt(0, 0) = gt(0, 2) = 1;
  EXPECT_NEAR(AveragePrecision(s, gt), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
  EXPECT_NEAR(AveragePrecision(s, gt), 0.8333, 1e-4);

  ScoreMap perfect(1, 4, 0.0);
  for (std::size_t i = 0; i < 4; ++i) perfect.at_flat(i) = gt.at_flat(i);
  EXPECT_EQ(AveragePrecision(perfect, gt), 1.0);
}

TEST(AveragePrecisionTest, ExhaustiveEightCellAssignments) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreMap s(2, 4, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) s.at_flat(i) = u(rng);
  for (int mask = 1; mask < 256; ++mask) {
    BinaryMap gt(2, 4, 0);
    for (int i = 0; i < 8; ++i) gt.at_flat(static_cast<std::size_t>(i)) = (mask >> i) & 1;
    ASSERT_NEAR(AveragePrecision(s, gt), testing::BruteForceAp(s, gt), 1e-12) << mask;
  }
}

TEST(AveragePrecisionTest, ConstantScoresFollowRowMajorOrder) {
  std::mt19937_64 rng(43);
  std::bernoulli_distribution bit(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryMap gt(6, 6, 0);
    for (std::size_t i = 0; i < gt.size(); ++i) gt.at_flat(i) = bit(rng);
    gt.at_flat(static_cast<std::size_t>(trial % 36)) = 1;
    const ScoreMap flat(6, 6, 0.25);
    ASSERT_NEAR(AveragePrecision(flat, gt), testing::BruteForceAp(flat, gt), 1e-12);
  }
}

TEST(AveragePrecisionTest, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ScoreMap s(7, 9, 0.0);
    BinaryMap gt(7, 9, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s.at_flat(i) = std::round(u(rng) * 20) / 20;  // plenty of ties
      gt.at_flat(i) = u(rng) < 0.2;
    }
    gt.at_flat(0) = 1;
    ScoreMap t = s;
    for (double& v : t.values()) v = std::exp(3 * v) - 7;
    ASSERT_EQ(AveragePrecision(s, gt), AveragePrecision(t, gt));
  }
}

TEST(MeanAveragePrecisionTest, UnweightedMean) {
  ScoreMap s(1, 2, 0.0);
  s(0, 0) = 0.2;
  s(0, 1) = 0.9;
  BinaryMap a(1, 2, 0);
  a(0, 1) = 1;
  BinaryMap b(1, 2, 0);
  b(0, 0) = 1;
  const std::vector<std::pair<ScoreMap, BinaryMap>> images = {{s, a}, {s, b}};
  EXPECT_DOUBLE_EQ(MeanAveragePrecision(images), (1.0 + 0.5) / 2);
  EXPECT_THROW(MeanAveragePrecision({}), Error);
}

SemanticMap Crafted() {
  const int ids[5][5] = {{0, 0, 1, 1, 2},
                         {0, 0, 1, 1, 2},
                         {2, 2, 2, 1, 2},
                         {2, 2, 0, 0, 0},
                         {1, 1, 0, 0, 0}};
  SemanticMap sem{Grid<int>(5, 5, 0), 3};
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) sem.labels(r, c) = ids[r][c];
  }
  return sem;
}

TEST(SemanticHistogramTest, CraftedModes) {
  // Hand modes: (1,1)->0, (3,3)->0, (4,0)->tie 1/2->1, (0,4)->tie->1,
  // (2,2)->three-way tie->0.
  const std::vector<Pixel> at = {{1.5, 1.5}, {3.2, 3.9}, {0.0, 4.0}, {4.9, 0.1}, {2.5, 2.5}};
  const ClassHistogram h = SemanticHistogram(at, Crafted(), 3);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_DOUBLE_EQ(h[0], 0.6);
  EXPECT_DOUBLE_EQ(h[1], 0.4);
  EXPECT_EQ(h[2], 0.0);
}

TEST(SemanticHistogramTest, UniformMapAndWindowOne) {
  const SemanticMap uniform{Grid<int>(4, 4, 2), 4};
  const std::vector<Pixel> at = {{0, 0}, {3.5, 3.5}, {1, 2}};
  EXPECT_EQ(SemanticHistogram(at, uniform), (ClassHistogram{0, 0, 1, 0}));
  const std::vector<Pixel> one = {{3.7, 2.1}};
  EXPECT_EQ(SemanticHistogram(one, Crafted(), 1), (ClassHistogram{0, 1, 0}));
}

TEST(SemanticHistogramTest, SumsToOne) {
  std::mt19937_64 rng(45);
  SemanticMap sem{Grid<int>(30, 40, 0), 6};
  std::uniform_int_distribution<int> cls(0, 5);
  for (int& v : sem.labels.values()) v = cls(rng);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  std::uniform_real_distribution<double> v(0.0, 30.0);
  std::vector<Pixel> at;
  for (int i = 0; i < 333; ++i) at.push_back({u(rng), v(rng)});
  const ClassHistogram h = SemanticHistogram(at, sem);
  double sum = 0.0;
  for (const double x : h) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(SemanticHistogramTest, Errors) {
  const SemanticMap sem = Crafted();
  try {
    SemanticHistogram({}, sem);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyLocations);
  }
  const std::vector<Pixel> at = {{1, 1}};
  EXPECT_THROW(SemanticHistogram(at, sem, 4), Error);
  const std::vector<Pixel> outside = {{5.0, 1}};
  EXPECT_THROW(SemanticHistogram(outside, sem), Error);
  SemanticMap bad = sem;
  bad.labels(0, 0) = 3;
  EXPECT_THROW(SemanticHistogram(at, bad), Error);
}

TEST(KlDivergenceTest, Fixtures) {
  const double kl = KlDivergence({0.5, 0.5}, {0.25, 0.75}, 0.0);
  EXPECT_NEAR(kl, 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(kl, 0.1438, 1e-4);
  EXPECT_EQ(KlDivergence({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}), 0.0);
  EXPECT_EQ(KlDivergence({1, 0, 0}, {1, 0, 0}, 0.0), 0.0);
  // Smoothing keeps zero bins finite.
  EXPECT_TRUE(std::isfinite(KlDivergence({1, 0}, {0, 1})));
  EXPECT_GT(KlDivergence({1, 0}, {0, 1}), 0.0);
  EXPECT_THROW(KlDivergence({0.5, 0.5}, {1.0}), Error);
  EXPECT_THROW(KlDivergence({0.5, 0.5}, {0.5, 0.5}, -1.0), Error);
}

TEST(SampleLocationsTest, OneHotAndEmpty) {
  ScoreMap s(3, 4, 0.0);
  s(2, 1) = 0.7;
  const std::vector<Pixel> at = SampleLocations(s, 50, 1, 4);
  ASSERT_EQ(at.size(), 50u);
  for (const Pixel& p : at) EXPECT_EQ(p, (Pixel{6.0, 10.0}));
  EXPECT_TRUE(SampleLocations(s, 0, 1).empty());
  EXPECT_EQ(SampleLocations(s, 100, 9), SampleLocations(s, 100, 9));
}

void ExpectFrequencies(const ScoreMap& s, const std::vector<double>& prob, std::uint64_t seed) {
  const std::size_t n = 1000000;
  const std::vector<Pixel> at = SampleLocations(s, n, seed);
  std::vector<double> hits(prob.size(), 0.0);
  for (const Pixel& p : at) {
    hits[static_cast<std::size_t>(p.v) * static_cast<std::size_t>(s.cols()) +
         static_cast<std::size_t>(p.u)] += 1;
  }
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double sd = std::sqrt(n * prob[i] * (1 - prob[i]));
    EXPECT_NEAR(hits[i], n * prob[i], 3 * sd) << i;
  }
}

TEST(SampleLocationsTest, FrequenciesMatchScores) {
  ScoreMap s(2, 2, 0.0);
  s(0, 0) = 0.1;
  s(0, 1) = 0.2;
  s(1, 0) = 0.3;
  s(1, 1) = 0.4;
  ExpectFrequencies(s, {0.1, 0.2, 0.3, 0.4}, 2024);
  ExpectFrequencies(ScoreMap(2, 2, 0.0), {0.25, 0.25, 0.25, 0.25}, 2025);
}

}  // namespace
}  // namespace footprint::eval
