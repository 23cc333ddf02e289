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
#include <optional>
#include <vector>

#include "aesguard/pipeline.hpp"

namespace aesguard {

// Timing rule: flag a block when its time strictly exceeds
//   mean + 3 * (max - min) / n
// over the fitted population.
struct ThresholdModel {
  double mean_us = 0.0;
  double min_us = 0.0;
  double max_us = 0.0;
  std::size_t n = 0;
  double threshold_us = 0.0;
};

// Throws Error(kEmptySample) on empty input.
ThresholdModel fit_threshold(std::span<const double> times_us);

bool classify_threshold(double time_us, const ThresholdModel& model) noexcept;
std::vector<bool> classify_threshold(std::span<const BlockRecord> records, const ThresholdModel& model);

// Which population the threshold is fitted on.
enum class ThresholdFit {
  kAll,    // every record in the run
  kTrain,  // only the training partition
};

std::string_view to_string(ThresholdFit f) noexcept;
std::optional<ThresholdFit> parse_threshold_fit(std::string_view s) noexcept;

}  // namespace aesguard
