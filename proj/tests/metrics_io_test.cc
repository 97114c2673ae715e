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

#include "footprint/metrics_io.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include "json.hpp"

#include "footprint/error.h"
#include "test_support.h"

namespace footprint::io {
namespace {

using eval::MetricsReport;

TEST(MetricsJsonTest, FixedKeysAndNulls) {
  MetricsReport r;
  r.pred_total = 1.0;
  r.pred_valid_tp = 1.0;
  r.missing_fn = 0.0;
  r.expansion = 0.0;
  const auto j = nlohmann::json::parse(MetricsToJson(r));
  ASSERT_EQ(j.size(), kMetricsColumns.size());
  EXPECT_EQ(j["pred_total"], 1.0);
  EXPECT_EQ(j["pred_valid_tp"], 1.0);
  EXPECT_EQ(j["missing_fn"], 0.0);
  EXPECT_EQ(j["expansion"], 0.0);
  EXPECT_TRUE(j["map"].is_null());
  EXPECT_TRUE(j["kl"].is_null());
  EXPECT_EQ(ParseMetricsJson(MetricsToJson(r)), r);
}

TEST(MetricsJsonTest, DecimalValuesSurviveExactly) {
  const MetricsReport r{8.18, 0.69, 0.31, 7.49, 0.5, 0.1438};
  EXPECT_EQ(ParseMetricsJson(MetricsToJson(r)), r);
  EXPECT_NE(MetricsToJson(r).find("8.18"), std::string::npos);
}

TEST(MetricsCsvTest, HeaderOrderAndEmptyCells) {
  MetricsReport r;
  r.map = 0.25;
  const std::string csv = MetricsToCsv(r);
  EXPECT_EQ(csv, "pred_total,pred_valid_tp,missing_fn,expansion,map,kl\n,,,,0.25,\n");
  EXPECT_EQ(ParseMetricsCsv(csv), r);
}

TEST(MetricsIoTest, RandomRoundTripBothFormats) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  std::bernoulli_distribution present(0.7);
  const auto dir = testing::TempDir("metrics");
  for (int trial = 0; trial < 200; ++trial) {
    MetricsReport r;
    for (std::optional<double>* f :
         {&r.pred_total, &r.pred_valid_tp, &r.missing_fn, &r.expansion, &r.map, &r.kl}) {
      if (present(rng)) *f = u(rng);
    }
    EXPECT_EQ(ParseMetricsJson(MetricsToJson(r)), r);
    EXPECT_EQ(ParseMetricsCsv(MetricsToCsv(r)), r);
    if (trial % 50 == 0) {
      WriteMetrics(r, dir / "m.json", MetricsFormat::kJson);
      WriteMetrics(r, dir / "m.csv", MetricsFormat::kCsv);
      EXPECT_EQ(ReadMetrics(dir / "m.json", MetricsFormat::kJson), r);
      EXPECT_EQ(ReadMetrics(dir / "m.csv", MetricsFormat::kCsv), r);
    }
  }
}

TEST(MetricsIoTest, RejectsNonFiniteAndMalformed) {
  MetricsReport r;
  r.kl = std::numeric_limits<double>::infinity();
  EXPECT_THROW(WriteMetrics(r, testing::TempDir("bad") / "m.json", MetricsFormat::kJson), Error);
  EXPECT_THROW(ParseMetricsJson("{\"map\": \"x\"}"), Error);
  EXPECT_THROW(ParseMetricsJson("[1]"), Error);
  EXPECT_THROW(ParseMetricsCsv("a,b\n1,2\n"), Error);
}

}  // namespace
}  // namespace footprint::io
