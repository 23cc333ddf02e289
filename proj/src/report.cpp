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

#include "aesguard/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>

#include "aesguard/csv.hpp"
#include "aesguard/error.hpp"

namespace aesguard {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

bool parse_flag(const std::string& s, std::size_t line) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw Error(ErrorKind::kIo, "line " + std::to_string(line) + ": expected 0/1, got '" + s + "'");
}

}  // namespace

std::string run_id(const RunConfig& cfg) {
  return "s" + std::to_string(cfg.seed) + "_n" + std::to_string(cfg.n_blocks) + "_p" + shortest(cfg.inject_pct);
}

void write_blocks_csv(std::ostream& out, const ExperimentResult& result, ByteSource source) {
  csv::write_row(out, block_csv_header());
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const BlockRecord& r = result.records[i];
    const Block& bytes = source == ByteSource::kCiphertext ? r.ciphertext : r.plaintext_effective;
    csv::write_row(out, {std::to_string(r.index), result.in_test(i) ? "test" : "train", csv::fixed(r.time_us, 3),
                         std::string(to_string(r.tag.kind)), std::to_string(r.tag.delay_us), flag(r.truth_label()),
                         flag(result.threshold_predictions[i]), flag(result.forest_predictions[i]), to_hex(bytes)});
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result, const ExperimentConfig& cfg) {
  csv::write_row(out, {"run_id", "detector", "tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1",
                       "accuracy_gain", "threshold_us", "eval_rows", "n_blocks", "inject_pct", "seed", "mode",
                       "input_dist", "anomaly_mix", "delay_min_us", "delay_max_us", "base_time_us", "jitter_us",
                       "work_amp", "byte_source", "threshold_fit", "n_trees", "max_depth", "features_per_split",
                       "train_fraction"});
  const auto& run = cfg.run;
  for (const DetectionReport* rep : {&result.threshold_report, &result.forest_report}) {
    const auto& c = rep->counts;
    csv::write_row(out, {run_id(run), std::string(to_string(rep->detector)), std::to_string(c.tp),
                         std::to_string(c.fp), std::to_string(c.fn), std::to_string(c.tn),
                         csv::fixed(rep->accuracy, 6), csv::fixed(rep->precision, 6), csv::fixed(rep->recall, 6),
                         csv::fixed(rep->f1, 6), csv::fixed(result.comparison.accuracy_gain, 6),
                         csv::fixed(result.threshold.threshold_us, 3), std::to_string(c.total()),
                         std::to_string(run.n_blocks), shortest(run.inject_pct), std::to_string(run.seed),
                         std::string(to_string(run.mode)), std::string(to_string(run.input_dist)),
                         std::string(to_string(run.mix)), std::to_string(run.delay_min_us),
                         std::to_string(run.delay_max_us), shortest(run.base_time_us), shortest(run.jitter_us),
                         std::to_string(run.work_amplification), std::string(to_string(cfg.byte_source)),
                         std::string(to_string(cfg.threshold_fit)), std::to_string(cfg.forest.n_trees),
                         cfg.forest.max_depth ? std::to_string(*cfg.forest.max_depth) : "unlimited",
                         std::to_string(cfg.forest.features_per_split), shortest(cfg.forest.train_fraction)});
  }
}

ExportPaths export_csv(const ExperimentResult& result, const ExperimentConfig& cfg,
                       const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory '" + dir.string() + "': " + ec.message());

  const std::string id = run_id(cfg.run);
  ExportPaths paths{dir / ("blocks_" + id + ".csv"), dir / ("summary_" + id + ".csv")};
  {
    auto out = open_for_write(paths.blocks);
    write_blocks_csv(out, result, cfg.byte_source);
    finish(out, paths.blocks);
  }
  {
    auto out = open_for_write(paths.summary);
    write_summary_csv(out, result, cfg);
    finish(out, paths.summary);
  }
  return paths;
}

std::vector<BlockRow> read_blocks_csv(std::istream& in) {
  const auto table = csv::parse(in);
  if (table.empty()) throw Error(ErrorKind::kIo, "per-block CSV is empty (header row missing)");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < table[0].size(); ++i) column[table[0][i]] = i;
  auto find = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = column.find(name);
    return it == column.end() ? std::nullopt : std::optional(it->second);
  };
  const auto time_col = find("time_us");
  const auto bytes_col = find("feature_bytes_hex");
  if (!time_col || !bytes_col) {
    throw Error(ErrorKind::kIo, "per-block CSV needs 'time_us' and 'feature_bytes_hex' columns");
  }
  const auto index_col = find("index");
  const auto label_col = find("truth_label");
  const auto thr_col = find("threshold_pred");
  const auto rf_col = find("forest_pred");
  const auto split_col = find("split");
  const auto tag_col = find("tag");

  std::vector<BlockRow> rows;
  for (std::size_t line = 1; line < table.size(); ++line) {
    const auto& fields = table[line];
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != table[0].size()) {
      throw Error(ErrorKind::kIo, "line " + std::to_string(line + 1) + ": expected " +
                                      std::to_string(table[0].size()) + " fields, got " +
                                      std::to_string(fields.size()));
    }
    BlockRow row;
    row.index = rows.size();
    if (index_col) {
      const auto& s = fields[*index_col];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), row.index);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorKind::kIo, "line " + std::to_string(line + 1) + ": bad index '" + s + "'");
      }
    }
    {
      const auto& s = fields[*time_col];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), row.time_us);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorKind::kIo, "line " + std::to_string(line + 1) + ": bad time_us '" + s + "'");
      }
    }
    const auto bytes = from_hex(fields[*bytes_col]);
    if (bytes.size() != kBlockSize) {
      throw Error(ErrorKind::kIo, "line " + std::to_string(line + 1) + ": feature_bytes_hex must hold 16 bytes");
    }
    std::copy(bytes.begin(), bytes.end(), row.feature_bytes.begin());
    if (label_col && !fields[*label_col].empty()) row.truth_label = parse_flag(fields[*label_col], line + 1);
    if (thr_col && !fields[*thr_col].empty()) row.threshold_pred = parse_flag(fields[*thr_col], line + 1);
    if (rf_col && !fields[*rf_col].empty()) row.forest_pred = parse_flag(fields[*rf_col], line + 1);
    if (split_col) row.split = fields[*split_col];
    if (tag_col) row.tag = fields[*tag_col];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BlockRow> read_blocks_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
  return read_blocks_csv(in);
}

Dataset dataset_from_rows(const std::vector<BlockRow>& rows) {
  Dataset data(kBlockFeatureCount);
  std::array<double, kBlockFeatureCount> values{};
  for (const auto& row : rows) {
    values[0] = row.time_us;
    for (std::size_t i = 0; i < kBlockSize; ++i) values[1 + i] = row.feature_bytes[i];
    data.add(values, row.truth_label.value_or(false));
  }
  return data;
}

}  // namespace aesguard
