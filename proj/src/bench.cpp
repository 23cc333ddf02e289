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

#include "aesguard/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <exception>
#include <ostream>

#include "aesguard/csv.hpp"
#include "aesguard/pipeline.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

namespace aesguard {

std::optional<double> peak_resident_mb() {
#if defined(__unix__) || defined(__APPLE__)
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return std::nullopt;
#if defined(__APPLE__)
  const double bytes = static_cast<double>(usage.ru_maxrss);  // bytes on macOS
#else
  const double bytes = static_cast<double>(usage.ru_maxrss) * 1024.0;  // KiB on Linux
#endif
  return bytes / (1024.0 * 1024.0);
#else
  return std::nullopt;
#endif
}

BenchRecord measure_run(const RunConfig& cfg, const Key128& key) {
  BenchRecord rec;
  rec.block_count = cfg.n_blocks;
  rec.workers = cfg.workers;

  (void)run_pipeline(cfg, key);  // warm-up

  const auto start = std::chrono::steady_clock::now();
  const auto records = run_pipeline(cfg, key);
  const auto stop = std::chrono::steady_clock::now();

  rec.wall_time_s = std::chrono::duration<double>(stop - start).count();
  double total_us = 0.0;
  for (const auto& r : records) total_us += r.time_us;
  rec.mean_latency_us = records.empty() ? 0.0 : total_us / static_cast<double>(records.size());
  rec.throughput_bps = rec.wall_time_s > 0.0 ? static_cast<double>(records.size()) / rec.wall_time_s : 0.0;
  rec.peak_memory_mb = peak_resident_mb();
  return rec;
}

std::vector<BenchRecord> sweep(const std::vector<std::size_t>& block_counts, const std::vector<unsigned>& worker_counts,
                               const RunConfig& base, const Key128& key) {
  auto blocks = block_counts;
  auto workers = worker_counts;
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  std::sort(workers.begin(), workers.end());
  workers.erase(std::unique(workers.begin(), workers.end()), workers.end());

  std::vector<BenchRecord> out;
  for (std::size_t n : blocks) {
    for (unsigned w : workers) {
      RunConfig cfg = base;
      cfg.n_blocks = n;
      cfg.workers = w;
      try {
        out.push_back(measure_run(cfg, key));
      } catch (const std::exception& e) {
        BenchRecord failed;
        failed.block_count = n;
        failed.workers = w;
        failed.error = e.what();
        out.push_back(std::move(failed));
      }
    }
  }
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  csv::write_row(out, {"block_count", "workers", "mean_latency_us", "throughput_bps", "peak_memory_mb",
                       "wall_time_s", "error"});
  for (const auto& r : records) {
    csv::write_row(out, {std::to_string(r.block_count), std::to_string(r.workers),
                         r.ok() ? csv::fixed(r.mean_latency_us, 3) : "", r.ok() ? csv::fixed(r.throughput_bps, 2) : "",
                         r.ok() && r.peak_memory_mb ? csv::fixed(*r.peak_memory_mb, 1) : "",
                         r.ok() ? csv::fixed(r.wall_time_s, 6) : "", r.error});
  }
}

std::string bench_file_name() {
  const std::time_t now = std::time(nullptr);
  std::tm local{};
#if defined(_WIN32)
  localtime_s(&local, &now);
#else
  localtime_r(&now, &local);
#endif
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%S", &local);
  return std::string("bench_") + buf + ".csv";
}

}  // namespace aesguard
