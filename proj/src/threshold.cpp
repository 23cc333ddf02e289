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

#include "aesguard/threshold.hpp"

#include <algorithm>

#include "aesguard/error.hpp"

namespace aesguard {

ThresholdModel fit_threshold(std::span<const double> times_us) {
  if (times_us.empty()) throw Error(ErrorKind::kEmptySample, "cannot fit a threshold on zero timings");
  const auto [lo, hi] = std::minmax_element(times_us.begin(), times_us.end());
  ThresholdModel m;
  m.n = times_us.size();
  m.min_us = *lo;
  m.max_us = *hi;
  if (m.min_us == m.max_us) {
    m.mean_us = m.min_us;
  } else {
    // Shift by the minimum so large absolute offsets don't swamp the sum.
    long double acc = 0.0L;
    for (double t : times_us) acc += static_cast<long double>(t) - m.min_us;
    m.mean_us = std::clamp(static_cast<double>(m.min_us + acc / m.n), m.min_us, m.max_us);
  }
  m.threshold_us = m.mean_us + 3.0 * (m.max_us - m.min_us) / static_cast<double>(m.n);
  return m;
}

bool classify_threshold(double time_us, const ThresholdModel& model) noexcept {
  return time_us > model.threshold_us;
}

std::vector<bool> classify_threshold(std::span<const BlockRecord> records, const ThresholdModel& model) {
  std::vector<bool> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(classify_threshold(r.time_us, model));
  return out;
}

std::string_view to_string(ThresholdFit f) noexcept { return f == ThresholdFit::kTrain ? "train" : "all"; }

std::optional<ThresholdFit> parse_threshold_fit(std::string_view s) noexcept {
  if (s == "all") return ThresholdFit::kAll;
  if (s == "train") return ThresholdFit::kTrain;
  return std::nullopt;
}

}  // namespace aesguard
