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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "footprint/error.h"
#include "footprint/random.h"

namespace footprint::eval {

BinaryMap Threshold(const ScoreMap& scores, double threshold) {
  BinaryMap out(scores.rows(), scores.cols(), 0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.at_flat(i) = scores.at_flat(i) > threshold ? 1 : 0;
  }
  return out;
}

MetricsReport ExpansionMetrics(const BinaryMap& pred, const BinaryMap& gt) {
  RequireSameShape(pred, gt, "expansion metrics");
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const bool p = pred.at_flat(i) != 0;
    const bool g = gt.at_flat(i) != 0;
    tp += (p && g) ? 1 : 0;
    fn += (!p && g) ? 1 : 0;
    fp += (p && !g) ? 1 : 0;
  }
  const std::size_t positives = tp + fn;
  if (positives == 0) throw Error(ErrorCode::kEmptyGroundTruth, "ground truth has no positives");
  const double g = static_cast<double>(positives);
  MetricsReport report;
  report.pred_valid_tp = static_cast<double>(tp) / g;
  report.missing_fn = static_cast<double>(fn) / g;
  report.expansion = static_cast<double>(fp) / g;
  report.pred_total = *report.pred_valid_tp + *report.expansion;
  return report;
}

double AveragePrecision(const ScoreMap& scores, const BinaryMap& gt) {
  RequireSameShape(scores, gt, "average precision");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  for (const double s : scores.values()) {
    if (std::isnan(s)) throw Error(ErrorCode::kNonFiniteValue, "score is NaN");
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.at_flat(a) > scores.at_flat(b);
  });
  std::size_t positives = 0;
  for (const auto y : gt.values()) positives += y != 0 ? 1 : 0;
  if (positives == 0) throw Error(ErrorCode::kEmptyGroundTruth, "ground truth has no positives");

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (gt.at_flat(order[rank]) == 0) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  return sum / static_cast<double>(positives);
}

double MeanAveragePrecision(std::span<const std::pair<ScoreMap, BinaryMap>> images) {
  if (images.empty()) throw Error(ErrorCode::kInvalidArgument, "mAP needs at least one image");
  double sum = 0.0;
  for (const auto& [scores, gt] : images) sum += AveragePrecision(scores, gt);
  return sum / static_cast<double>(images.size());
}

void SemanticMap::Validate() const {
  if (num_classes < 1) throw Error(ErrorCode::kInvalidArgument, "num_classes must be >= 1");
  for (const int id : labels.values()) {
    if (id < 0 || id >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "semantic id " + std::to_string(id) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

ClassHistogram SemanticHistogram(std::span<const geometry::Pixel> locations,
                                 const SemanticMap& semantic, int window) {
  if (locations.empty()) throw Error(ErrorCode::kEmptyLocations, "no locations to histogram");
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "window must be a positive odd integer");
  }
  semantic.Validate();
  const Grid<int>& labels = semantic.labels;
  const int half = window / 2;
  std::vector<std::size_t> counts(static_cast<std::size_t>(semantic.num_classes), 0);
  std::vector<int> local(static_cast<std::size_t>(semantic.num_classes), 0);

  for (const geometry::Pixel& loc : locations) {
    const double fu = std::floor(loc.u);
    const double fv = std::floor(loc.v);
    if (!(fu >= 0 && fv >= 0 && fu < labels.cols() && fv < labels.rows())) {
      throw Error(ErrorCode::kInvalidArgument, "location outside the semantic map");
    }
    const int col = static_cast<int>(fu);
    const int row = static_cast<int>(fv);
    std::fill(local.begin(), local.end(), 0);
    for (int r = std::max(0, row - half); r <= std::min(labels.rows() - 1, row + half); ++r) {
      for (int c = std::max(0, col - half); c <= std::min(labels.cols() - 1, col + half); ++c) {
        ++local[static_cast<std::size_t>(labels(r, c))];
      }
    }
    // max_element returns the first maximum, i.e. the smallest id.
    const auto mode = std::max_element(local.begin(), local.end()) - local.begin();
    ++counts[static_cast<std::size_t>(mode)];
  }
  ClassHistogram out(counts.size());
  const double total = static_cast<double>(locations.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / total;
  return out;
}

double KlDivergence(const ClassHistogram& p, const ClassHistogram& q, double epsilon) {
  if (p.size() != q.size()) throw Error(ErrorCode::kShapeMismatch, "histograms differ in length");
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "empty histogram");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be finite and >= 0");
  }
  auto smooth = [epsilon](const ClassHistogram& h) {
    ClassHistogram s(h.size());
    double total = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (!(h[i] >= 0.0) || !std::isfinite(h[i])) {
        throw Error(ErrorCode::kInvalidArgument, "histogram bins must be finite and >= 0");
      }
      s[i] = h[i] + epsilon;
      total += s[i];
    }
    if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "histogram has no mass");
    for (double& v : s) v /= total;
    return s;
  };
  const ClassHistogram ps = smooth(p);
  const ClassHistogram qs = smooth(q);
  double kl = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] == 0.0) continue;
    if (qs[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += ps[i] * std::log(ps[i] / qs[i]);
  }
  return std::max(0.0, kl);
}

std::vector<geometry::Pixel> SampleLocations(const ScoreMap& scores, std::size_t n,
                                             std::uint64_t seed, int downsample) {
  if (downsample < 1) throw Error(ErrorCode::kInvalidArgument, "downsample must be >= 1");
  std::vector<geometry::Pixel> out;
  if (n == 0 || scores.empty()) return out;
  std::vector<double> cumulative(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores.at_flat(i);
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, "scores must be finite and >= 0");
    }
    total += s;
    cumulative[i] = total;
  }
  const bool uniform = total == 0.0;
  CounterRng rng(seed);
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t cell = 0;
    if (uniform) {
      cell = static_cast<std::size_t>(rng.Below(scores.size()));
    } else {
      const double target = rng.Uniform01() * total;
      cell = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
      if (cell >= scores.size()) {
        // u * total rounded up to total; take the last cell with mass.
        cell = scores.size() - 1;
        while (scores.at_flat(cell) == 0.0) --cell;
      }
    }
    const auto cols = static_cast<std::size_t>(scores.cols());
    out.push_back(geometry::Pixel{(static_cast<double>(cell % cols) + 0.5) * downsample,
                                  (static_cast<double>(cell / cols) + 0.5) * downsample});
  }
  return out;
}

}  // namespace footprint::eval
