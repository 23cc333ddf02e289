// Copyright 2026 The aesguard Authors
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

#include "aesguard/metrics.hpp"

#include <string>

#include "aesguard/error.hpp"

namespace aesguard {
namespace {

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view to_string(Detector d) noexcept { return d == Detector::kForest ? "forest" : "threshold"; }

DetectionReport score(const std::vector<bool>& predictions, const std::vector<bool>& truths, Detector detector,
                      std::vector<std::size_t> rows) {
  if (predictions.size() != truths.size()) {
    throw Error(ErrorKind::kShape, "predictions (" + std::to_string(predictions.size()) + ") and truths (" +
                                       std::to_string(truths.size()) + ") differ in length");
  }
  if (predictions.empty()) throw Error(ErrorKind::kShape, "cannot score an empty prediction set");
  if (!rows.empty() && rows.size() != predictions.size()) {
    throw Error(ErrorKind::kShape, "row index list does not match prediction count");
  }

  DetectionReport r;
  r.detector = detector;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool p = predictions[i];
    const bool t = truths[i];
    if (p && t) ++r.counts.tp;
    else if (p && !t) ++r.counts.fp;
    else if (!p && t) ++r.counts.fn;
    else ++r.counts.tn;
  }
  const auto& c = r.counts;
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  r.predictions = predictions;
  r.truths = truths;
  r.rows = std::move(rows);
  return r;
}

ComparisonReport compare(const DetectionReport& threshold, const DetectionReport& forest) {
  if (threshold.truths != forest.truths || threshold.rows != forest.rows) {
    throw Error(ErrorKind::kComparison, "reports were scored on different evaluation subsets");
  }
  ComparisonReport c;
  c.accuracy_gain = forest.accuracy - threshold.accuracy;
  c.threshold_fp = threshold.counts.fp;
  c.threshold_fn = threshold.counts.fn;
  c.forest_fp = forest.counts.fp;
  c.forest_fn = forest.counts.fn;
  return c;
}

double recall_on(std::span<const BlockRecord> records, const std::vector<bool>& predictions, AnomalyKind kind) {
  if (records.size() != predictions.size()) {
    throw Error(ErrorKind::kShape, "records and predictions differ in length");
  }
  std::size_t tagged = 0, caught = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].tag.kind != kind) continue;
    ++tagged;
    if (predictions[i]) ++caught;
  }
  return ratio(caught, tagged);
}

double false_positive_rate(const ConfusionCounts& counts) noexcept { return ratio(counts.fp, counts.fp + counts.tn); }

}  // namespace aesguard
