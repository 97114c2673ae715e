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

#ifndef FOOTPRINT_METRICS_REPORT_H_
#define FOOTPRINT_METRICS_REPORT_H_

#include <optional>

namespace footprint::eval {

// Expansion ratios are normalized by the number of ground-truth positive
// cells. When all four are set:
//   pred_valid_tp + missing_fn == 1 and pred_total == pred_valid_tp + expansion.
struct MetricsReport {
  std::optional<double> pred_total;
  std::optional<double> pred_valid_tp;
  std::optional<double> missing_fn;
  std::optional<double> expansion;
  std::optional<double> map;  // mean average precision in [0, 1]
  std::optional<double> kl;   // nats, >= 0

  bool operator==(const MetricsReport&) const = default;
};

}  // namespace footprint::eval

#endif  // FOOTPRINT_METRICS_REPORT_H_
