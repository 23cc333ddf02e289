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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "aesguard/pipeline.hpp"

namespace aesguard {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

enum class Detector { kThreshold, kForest };
std::string_view to_string(Detector d) noexcept;

// Positive class = malicious. Any metric whose denominator is zero is 0.
struct DetectionReport {
  Detector detector = Detector::kThreshold;
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<bool> predictions;
  std::vector<bool> truths;
  // Record indices the predictions refer to; empty when the caller did not
  // say. compare() refuses reports evaluated on different rows.
  std::vector<std::size_t> rows;
};

// Throws Error(kShape) on a length mismatch or empty input.
DetectionReport score(const std::vector<bool>& predictions, const std::vector<bool>& truths,
                      Detector detector = Detector::kThreshold, std::vector<std::size_t> rows = {});

struct ComparisonReport {
  double accuracy_gain = 0.0;  // forest accuracy - threshold accuracy
  std::size_t threshold_fp = 0;
  std::size_t threshold_fn = 0;
  std::size_t forest_fp = 0;
  std::size_t forest_fn = 0;
};

// `threshold` and `forest` name the argument roles; swapping them negates the
// gain. Throws Error(kComparison) when the evaluation subsets differ.
ComparisonReport compare(const DetectionReport& threshold, const DetectionReport& forest);

// Fraction of records tagged `kind` that were predicted malicious; 0 when no
// record carries that tag. `predictions[i]` pairs with `records[i]`.
double recall_on(std::span<const BlockRecord> records, const std::vector<bool>& predictions, AnomalyKind kind);

// FP / (FP + TN) from the counts; 0 when there are no negatives.
double false_positive_rate(const ConfusionCounts& counts) noexcept;

}  // namespace aesguard
