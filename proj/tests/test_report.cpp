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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aesguard/csv.hpp"
#include "aesguard/error.hpp"
#include "aesguard/report.hpp"

using namespace aesguard;

namespace {

ExperimentConfig small_config(std::size_t n) {
  ExperimentConfig cfg;
  cfg.run.n_blocks = n;
  cfg.run.inject_pct = 30;
  cfg.run.seed = 5;
  cfg.run.input_dist = InputDistribution::kStructuredAscii;
  cfg.forest.n_trees = 11;
  return cfg;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("aesguard_report_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("csv escaping and parsing round trip") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::escape("two\nlines") == "\"two\nlines\"");

  const std::vector<std::string> row{"x", "a,b", "q\"q", "line\r\nbreak", ""};
  std::stringstream buf;
  csv::write_row(buf, row);
  csv::write_row(buf, {"1", "2"});
  const auto table = csv::parse(buf);
  REQUIRE(table.size() == 2);
  CHECK(table[0] == row);
  CHECK(table[1] == std::vector<std::string>{"1", "2"});

  std::istringstream crlf("a,b\r\nc,d\r\n");
  const auto t2 = csv::parse(crlf);
  REQUIRE(t2.size() == 2);
  CHECK(t2[1] == std::vector<std::string>{"c", "d"});

  std::istringstream broken("\"open,field\n");
  CHECK_THROWS_AS(csv::parse(broken), Error);
}

TEST_CASE("fixed formatting") {
  CHECK(csv::fixed(0.8, 6) == "0.800000");
  CHECK(csv::fixed(100.0005, 3).substr(0, 6) == "100.00");
  CHECK(csv::fixed(-1.5, 1) == "-1.5");
}

TEST_CASE("run ids") {
  RunConfig cfg;
  cfg.seed = 7;
  cfg.n_blocks = 4096;
  cfg.inject_pct = 20;
  CHECK(run_id(cfg) == "s7_n4096_p20");
  cfg.inject_pct = 12.5;
  CHECK(run_id(cfg) == "s7_n4096_p12.5");
}

TEST_CASE("export writes one block row per record and two summary rows") {
  const auto cfg = small_config(100);
  const auto result = run_experiment(cfg);
  const auto dir = scratch("export");
  const auto paths = export_csv(result, cfg, dir);
  CHECK(paths.blocks.filename() == "blocks_s5_n100_p30.csv");
  CHECK(paths.summary.filename() == "summary_s5_n100_p30.csv");

  const auto blocks = slurp(paths.blocks);
  CHECK(count_lines(blocks) == 101);
  CHECK(blocks.substr(0, blocks.find('\n')) ==
        "index,split,time_us,tag,delay_us,truth_label,threshold_pred,forest_pred,feature_bytes_hex");

  std::istringstream sin(slurp(paths.summary));
  const auto summary = csv::parse(sin);
  REQUIRE(summary.size() == 3);
  CHECK(summary[1][1] == "threshold");
  CHECK(summary[2][1] == "forest");
  CHECK(std::find(summary[0].begin(), summary[0].end(), "workers") == summary[0].end());

  const auto again = export_csv(run_experiment(cfg), cfg, dir);
  CHECK(slurp(again.blocks) == blocks);
  std::filesystem::remove_all(dir);
}

TEST_CASE("per-block CSV parses back to the exported predictions and labels") {
  const auto cfg = small_config(300);
  const auto result = run_experiment(cfg);
  std::stringstream buf;
  write_blocks_csv(buf, result, cfg.byte_source);
  const auto rows = read_blocks_csv(buf);
  REQUIRE(rows.size() == result.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& rec = result.records[i];
    REQUIRE(rows[i].index == rec.index);
    REQUIRE(rows[i].truth_label == rec.truth_label());
    REQUIRE(rows[i].threshold_pred == bool(result.threshold_predictions[i]));
    REQUIRE(rows[i].forest_pred == bool(result.forest_predictions[i]));
    REQUIRE(rows[i].feature_bytes == rec.plaintext_effective);
    REQUIRE(std::abs(rows[i].time_us - rec.time_us) <= 0.0005 + 1e-9);
    REQUIRE(rows[i].split == (result.in_test(i) ? "test" : "train"));
  }

  // Recomputing the test-partition metrics from the file gives the summary's numbers.
  std::vector<bool> preds, truths;
  for (const auto& row : rows) {
    if (row.split != "test") continue;
    preds.push_back(*row.forest_pred);
    truths.push_back(*row.truth_label);
  }
  const auto rescored = score(preds, truths, Detector::kForest);
  CHECK(rescored.counts == result.forest_report.counts);

  const auto data = dataset_from_rows(rows);
  CHECK(data.size() == rows.size());
  CHECK(data.at(3, 1) == double(rows[3].feature_bytes[0]));
}

TEST_CASE("per-block CSV reader errors") {
  std::istringstream missing("index,time_us\n0,1.0\n");
  CHECK_THROWS_AS(read_blocks_csv(missing), Error);
  std::istringstream short_hex("time_us,feature_bytes_hex\n1.0,abcd\n");
  CHECK_THROWS_AS(read_blocks_csv(short_hex), Error);
  std::istringstream bad_time("time_us,feature_bytes_hex\nfast,00000000000000000000000000000000\n");
  CHECK_THROWS_AS(read_blocks_csv(bad_time), Error);
  std::istringstream minimal("time_us,feature_bytes_hex\n1.5,000102030405060708090a0b0c0d0e0f\n");
  const auto rows = read_blocks_csv(minimal);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].truth_label.has_value());
  CHECK(rows[0].feature_bytes[15] == 0x0f);
}

TEST_CASE("unwritable output directory is reported with its path") {
  const auto cfg = small_config(60);
  const auto result = run_experiment(cfg);
  const auto dir = scratch("blocked");
  std::filesystem::create_directories(dir);
  const auto file = dir / "not_a_dir";
  std::ofstream(file) << "x";
  try {
    export_csv(result, cfg, file / "sub");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
    CHECK(std::string(e.what()).find("not_a_dir") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
