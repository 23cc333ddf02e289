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

#include "aesguard/experiment.hpp"

#include <algorithm>

namespace aesguard {

bool ExperimentResult::in_test(std::size_t index) const {
  return std::binary_search(split.test.begin(), split.test.end(), index);
}

ExperimentResult evaluate_records(std::vector<BlockRecord> records, const ExperimentConfig& cfg) {
  ExperimentResult out;
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  out.records = std::move(records);
  out.data = build_dataset(out.records, cfg.byte_source);

  ForestHyperparams hyper = cfg.forest;
  hyper.seed = cfg.run.seed;
  hyper.validate(out.data.n_features());
  out.split = split_train_test(out.data, hyper.train_fraction, cfg.run.seed);

  // Dataset rows line up with record positions after the sort above.
  std::vector<double> fit_times;
  if (cfg.threshold_fit == ThresholdFit::kTrain) {
    for (std::size_t r : out.split.train) fit_times.push_back(out.records[r].time_us);
  } else {
    for (const auto& rec : out.records) fit_times.push_back(rec.time_us);
  }
  out.threshold = fit_threshold(fit_times);
  out.threshold_predictions = classify_threshold(out.records, out.threshold);

  out.forest = fit_forest(out.data, out.split.train, hyper, cfg.byte_source);
  out.forest_predictions = out.forest.predict(out.data);

  std::vector<bool> truths, thr, rf;
  std::vector<std::size_t> rows;
  for (std::size_t r : out.split.test) {
    truths.push_back(out.records[r].truth_label());
    thr.push_back(out.threshold_predictions[r]);
    rf.push_back(out.forest_predictions[r]);
    rows.push_back(out.records[r].index);
  }
  out.threshold_report = score(thr, truths, Detector::kThreshold, rows);
  out.forest_report = score(rf, truths, Detector::kForest, rows);
  out.comparison = compare(out.threshold_report, out.forest_report);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  return evaluate_records(run_pipeline(cfg.run, cfg.key), cfg);
}

}  // namespace aesguard
