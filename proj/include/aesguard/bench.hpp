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

#include "aesguard/aes128.hpp"
#include "aesguard/workload.hpp"

namespace aesguard {

struct BenchRecord {
  std::size_t block_count = 0;
  unsigned workers = 0;
  double mean_latency_us = 0.0;  // mean of per-block measured spans
  double throughput_bps = 0.0;   // blocks per second of wall time
  std::optional<double> peak_memory_mb;  // MiB; nullopt where the platform has no counter
  double wall_time_s = 0.0;
  std::string error;  // non-empty when the cell failed

  bool ok() const { return error.empty(); }
};

// Peak resident set size of this process in MiB, if the platform reports it.
std::optional<double> peak_resident_mb();

// One untimed warm-up pipeline run, then one timed run.
BenchRecord measure_run(const RunConfig& cfg, const Key128& key);

// Cartesian product in ascending (block_count, workers) order. A failing cell
// is recorded with its error and the sweep moves on.
std::vector<BenchRecord> sweep(const std::vector<std::size_t>& block_counts, const std::vector<unsigned>& worker_counts,
                               const RunConfig& base, const Key128& key);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

// bench_<YYYYmmddTHHMMSS>.csv in local time.
std::string bench_file_name();

}  // namespace aesguard
