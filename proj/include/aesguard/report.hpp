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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aesguard/experiment.hpp"

namespace aesguard {

// "s<seed>_n<blocks>_p<inject-pct>", used in exported file names.
std::string run_id(const RunConfig& cfg);

inline const std::vector<std::string>& block_csv_header() {
  static const std::vector<std::string> header = {
      "index", "split", "time_us", "tag", "delay_us", "truth_label", "threshold_pred", "forest_pred",
      "feature_bytes_hex"};
  return header;
}

// Per-block table: one row per record, times with 3 decimals in microseconds,
// labels and predictions as 0/1, the 16 feature bytes as lowercase hex.
void write_blocks_csv(std::ostream& out, const ExperimentResult& result, ByteSource source);

// One row per detector: confusion counts, four metrics, accuracy gain,
// threshold and the run configuration. The worker count is deliberately
// absent so simulated runs export identical bytes for any pool size.
void write_summary_csv(std::ostream& out, const ExperimentResult& result, const ExperimentConfig& cfg);

struct ExportPaths {
  std::filesystem::path blocks;
  std::filesystem::path summary;
};

// Writes blocks_<runid>.csv and summary_<runid>.csv into `dir`, creating it
// if needed. Throws Error(kIo) naming the offending path.
ExportPaths export_csv(const ExperimentResult& result, const ExperimentConfig& cfg,
                       const std::filesystem::path& dir);

// A row read back from a per-block CSV. Only time_us and feature_bytes_hex
// are required; the remaining columns are optional.
struct BlockRow {
  std::size_t index = 0;
  double time_us = 0.0;
  Block feature_bytes{};
  std::optional<bool> truth_label;
  std::optional<bool> threshold_pred;
  std::optional<bool> forest_pred;
  std::string split;
  std::string tag;
};

// Throws Error(kIo) on a missing required column or malformed value.
std::vector<BlockRow> read_blocks_csv(std::istream& in);
std::vector<BlockRow> read_blocks_csv(const std::filesystem::path& path);

// Rebuilds the 17-feature table from CSV rows. Rows without a label get
// label false.
Dataset dataset_from_rows(const std::vector<BlockRow>& rows);

}  // namespace aesguard
