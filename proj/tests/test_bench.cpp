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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aesguard/bench.hpp"
#include "aesguard/csv.hpp"

using namespace aesguard;

namespace {

RunConfig bench_base() {
  RunConfig cfg;
  cfg.mode = TimingMode::kReal;
  cfg.inject_pct = 0;
  return cfg;
}

}  // namespace

TEST_CASE("sweep over one block count and three worker counts") {
  const auto recs = sweep({1024}, {4, 1, 2}, bench_base(), default_key());
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].workers == 1);
  CHECK(recs[1].workers == 2);
  CHECK(recs[2].workers == 4);
  for (const auto& r : recs) {
    CHECK(r.ok());
    CHECK(r.block_count == 1024);
    CHECK(r.mean_latency_us > 0.0);
    CHECK(r.wall_time_s > 0.0);
    CHECK(std::abs(r.throughput_bps - 1024.0 / r.wall_time_s) <= 0.01 * r.throughput_bps);
  }
}

TEST_CASE("sweep over four block counts, deduplicated and sorted") {
  const auto recs = sweep({16384, 1024, 8192, 4096, 1024}, {1}, bench_base(), default_key());
  REQUIRE(recs.size() == 4);
  const std::size_t expect[] = {1024, 4096, 8192, 16384};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(recs[i].block_count == expect[i]);
    CHECK(std::abs(recs[i].throughput_bps - double(expect[i]) / recs[i].wall_time_s) <= 0.01 * recs[i].throughput_bps);
  }
}

TEST_CASE("a failing cell is recorded and the sweep continues") {
  const auto recs = sweep({0, 64}, {1}, bench_base(), default_key());
  REQUIRE(recs.size() == 2);
  CHECK_FALSE(recs[0].ok());
  CHECK(recs[1].ok());
}

TEST_CASE("bench CSV layout") {
  const auto recs = sweep({64}, {1, 2}, bench_base(), default_key());
  std::stringstream buf;
  write_bench_csv(buf, recs);
  const auto table = csv::parse(buf);
  REQUIRE(table.size() == 3);
  CHECK(table[0] == std::vector<std::string>{"block_count", "workers", "mean_latency_us", "throughput_bps",
                                             "peak_memory_mb", "wall_time_s", "error"});
  CHECK(table[1][0] == "64");
  CHECK(table[2][1] == "2");
  CHECK(table[1][6].empty());
  CHECK(bench_file_name().rfind("bench_", 0) == 0);
  CHECK(bench_file_name().size() == std::string("bench_20260101T000000.csv").size());
}

TEST_CASE("peak memory is reported on this platform") {
  const auto mb = peak_resident_mb();
  REQUIRE(mb.has_value());
  CHECK(*mb > 0.0);
}
