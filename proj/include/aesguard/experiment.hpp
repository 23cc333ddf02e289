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

#include <vector>

#include "aesguard/aes128.hpp"
#include "aesguard/forest.hpp"
#include "aesguard/metrics.hpp"
#include "aesguard/pipeline.hpp"
#include "aesguard/threshold.hpp"

namespace aesguard {

struct ExperimentConfig {
  RunConfig run;
  ForestHyperparams forest;  // forest.seed is overwritten with run.seed
  ByteSource byte_source = ByteSource::kPlaintext;
  ThresholdFit threshold_fit = ThresholdFit::kAll;
  Key128 key = default_key();
};

// Everything one end-to-end run produces. Per-record vectors are indexed by
// record index; reports cover the test partition only.
struct ExperimentResult {
  std::vector<BlockRecord> records;
  Dataset data{kBlockFeatureCount};
  TrainTestSplit split;
  ThresholdModel threshold;
  ForestModel forest;
  std::vector<bool> threshold_predictions;
  std::vector<bool> forest_predictions;
  DetectionReport threshold_report;
  DetectionReport forest_report;
  ComparisonReport comparison;

  bool in_test(std::size_t index) const;
};

// generate -> inject -> encrypt -> split -> fit both detectors -> score both
// on the test partition -> compare.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Same, starting from already encrypted records.
ExperimentResult evaluate_records(std::vector<BlockRecord> records, const ExperimentConfig& cfg);

}  // namespace aesguard
