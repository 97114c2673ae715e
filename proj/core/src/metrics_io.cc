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

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <vector>

#include "footprint/error.h"
#include "json.hpp"
#include "number_format.h"

namespace footprint::io {
namespace {

using eval::MetricsReport;
using Field = std::optional<double> MetricsReport::*;

constexpr std::array<Field, 6> kFields = {
    &MetricsReport::pred_total, &MetricsReport::pred_valid_tp, &MetricsReport::missing_fn,
    &MetricsReport::expansion,  &MetricsReport::map,           &MetricsReport::kl};

void CheckFinite(const MetricsReport& report) {
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    const auto& v = report.*kFields[i];
    if (v && !std::isfinite(*v)) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "metric '" + std::string(kMetricsColumns[i]) + "' is not finite");
    }
  }
}

std::vector<std::string> SplitCsvRow(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string MetricsToJson(const MetricsReport& report) {
  CheckFinite(report);
  std::string out = "{";
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    if (i > 0) out += ",";
    out += "\"";
    out += kMetricsColumns[i];
    out += "\":";
    const auto& v = report.*kFields[i];
    out += v ? internal::ShortestDouble(*v) : "null";
  }
  out += "}\n";
  return out;
}

std::string MetricsToCsv(const MetricsReport& report) {
  CheckFinite(report);
  std::string out;
  for (std::size_t i = 0; i < kMetricsColumns.size(); ++i) {
    if (i > 0) out += ",";
    out += kMetricsColumns[i];
  }
  out += "\n";
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    if (i > 0) out += ",";
    const auto& v = report.*kFields[i];
    if (v) out += internal::ShortestDouble(*v);
  }
  out += "\n";
  return out;
}

MetricsReport ParseMetricsJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("metrics JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedRecord, "metrics JSON must be an object");
  MetricsReport report;
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    const auto it = doc.find(std::string(kMetricsColumns[i]));
    if (it == doc.end() || it->is_null()) continue;
    if (!it->is_number()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "metric '" + std::string(kMetricsColumns[i]) + "' must be a number");
    }
    report.*kFields[i] = it->get<double>();
  }
  return report;
}

MetricsReport ParseMetricsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::string row;
  if (!std::getline(in, header) || !std::getline(in, row)) {
    throw Error(ErrorCode::kMalformedRecord, "metrics CSV needs a header and one row");
  }
  const auto names = SplitCsvRow(header);
  const auto cells = SplitCsvRow(row);
  if (names.size() != kMetricsColumns.size() || cells.size() != kMetricsColumns.size()) {
    throw Error(ErrorCode::kMalformedRecord, "metrics CSV must have 6 columns", 2);
  }
  MetricsReport report;
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    if (names[i] != kMetricsColumns[i]) {
      throw Error(ErrorCode::kMalformedRecord, "unexpected CSV column '" + names[i] + "'", 1);
    }
    if (cells[i].empty()) continue;
    double value = 0.0;
    const char* first = cells[i].data();
    const char* last = first + cells[i].size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
      throw Error(ErrorCode::kMalformedRecord, "bad number '" + cells[i] + "'", 2);
    }
    report.*kFields[i] = value;
  }
  return report;
}

void WriteMetrics(const MetricsReport& report, const std::filesystem::path& path,
                  MetricsFormat format) {
  const std::string text =
      format == MetricsFormat::kJson ? MetricsToJson(report) : MetricsToCsv(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

MetricsReport ReadMetrics(const std::filesystem::path& path, MetricsFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return format == MetricsFormat::kJson ? ParseMetricsJson(text) : ParseMetricsCsv(text);
}

}  // namespace footprint::io
