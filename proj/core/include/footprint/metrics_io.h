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

#ifndef FOOTPRINT_METRICS_IO_H_
#define FOOTPRINT_METRICS_IO_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "footprint/metrics_report.h"

namespace footprint::io {

enum class MetricsFormat { kJson, kCsv };

// Fixed key names and CSV column order. Unset fields are JSON null and empty
// CSV cells.
inline constexpr std::array<std::string_view, 6> kMetricsColumns = {
    "pred_total", "pred_valid_tp", "missing_fn", "expansion", "map", "kl"};

std::string MetricsToJson(const eval::MetricsReport& report);
std::string MetricsToCsv(const eval::MetricsReport& report);

eval::MetricsReport ParseMetricsJson(const std::string& text);
eval::MetricsReport ParseMetricsCsv(const std::string& text);

// Throws NonFiniteValue if a set field is NaN/inf and IoError on write failure.
void WriteMetrics(const eval::MetricsReport& report, const std::filesystem::path& path,
                  MetricsFormat format);
eval::MetricsReport ReadMetrics(const std::filesystem::path& path, MetricsFormat format);

}  // namespace footprint::io

#endif  // FOOTPRINT_METRICS_IO_H_
