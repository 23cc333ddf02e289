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

#include "aesguard/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "aesguard/aes128.hpp"
#include "aesguard/bench.hpp"
#include "aesguard/csv.hpp"
#include "aesguard/error.hpp"
#include "aesguard/experiment.hpp"
#include "aesguard/report.hpp"

namespace aesguard {
namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "--inject-pct" -> "AESGUARD_INJECT_PCT"
std::string env_name(std::string_view flag) {
  std::string out = "AESGUARD_";
  for (char c : flag.substr(flag.find_first_not_of('-'))) {
    out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option(name, target, help)->envname(env_name(name))->capture_default_str();
}

struct RunFlags {
  std::size_t blocks = 4096;
  double inject_pct = 20.0;
  unsigned workers = 1;
  std::uint64_t seed = 42;
  std::string mode = "simulated";
  std::uint32_t delay_min_us = 5000;
  std::uint32_t delay_max_us = 20000;
  std::string anomaly_types = "both";
  std::string input_dist = "uniform";
  unsigned work_amp = 1;
  double base_time_us = 100.0;
  double jitter_us = 10.0;
  std::string key_hex;

  void attach(CLI::App* app) {
    flag(app, "--blocks", blocks, "Number of 16-byte plaintext blocks")->check(CLI::PositiveNumber);
    flag(app, "--inject-pct", inject_pct, "Per-block anomaly probability, percent [0,100]")
        ->check(CLI::Range(0.0, 100.0));
    flag(app, "--workers", workers, "Concurrent encryption workers")->check(CLI::PositiveNumber);
    flag(app, "--seed", seed, "Run seed (plaintext, schedule, jitter, split and forest streams)");
    flag(app, "--mode", mode, "Timing mode: real (sleep + monotonic clock) or simulated (additive model)")
        ->check(CLI::IsMember({"real", "simulated"}));
    flag(app, "--delay-min-us", delay_min_us, "Shortest injected delay, microseconds")->check(CLI::PositiveNumber);
    flag(app, "--delay-max-us", delay_max_us, "Longest injected delay, microseconds")->check(CLI::PositiveNumber);
    flag(app, "--anomaly-types", anomaly_types, "Injected kinds: both (fair coin), delay or fault")
        ->check(CLI::IsMember({"both", "delay", "fault"}));
    flag(app, "--input-dist", input_dist, "Plaintext bytes: uniform (0x00-0xFF) or ascii (0x20-0x7E)")
        ->check(CLI::IsMember({"uniform", "ascii"}));
    flag(app, "--work-amp", work_amp, "Encryptions per block (timed together)")->check(CLI::PositiveNumber);
    flag(app, "--base-time-us", base_time_us, "Simulated mode: benign block time, microseconds")
        ->check(CLI::NonNegativeNumber);
    flag(app, "--jitter-us", jitter_us, "Simulated mode: uniform jitter upper bound, microseconds")
        ->check(CLI::NonNegativeNumber);
    flag(app, "--key-hex", key_hex, "AES-128 key as 32 hex digits (default 000102...0e0f)");
  }

  RunConfig to_config() const {
    RunConfig cfg;
    cfg.n_blocks = blocks;
    cfg.inject_pct = inject_pct;
    cfg.workers = workers;
    cfg.seed = seed;
    cfg.mode = *parse_timing_mode(mode);
    cfg.delay_min_us = delay_min_us;
    cfg.delay_max_us = delay_max_us;
    cfg.mix = *parse_anomaly_mix(anomaly_types);
    cfg.input_dist = *parse_input_distribution(input_dist);
    cfg.work_amplification = work_amp;
    cfg.base_time_us = base_time_us;
    cfg.jitter_us = jitter_us;
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }

  Key128 key() const {
    if (key_hex.empty()) return default_key();
    try {
      return Key128::from_hex(key_hex);
    } catch (const Error& e) {
      throw UsageError(std::string("--key-hex: ") + e.what());
    }
  }
};

struct ForestFlags {
  std::size_t trees = 101;
  std::string max_depth = "16";
  std::size_t min_samples_split = 2;
  std::size_t features_per_split = 5;
  double train_fraction = 0.7;
  std::string byte_source = "plaintext";
  unsigned threads = 0;

  void attach(CLI::App* app) {
    flag(app, "--trees", trees, "Trees in the forest")->check(CLI::PositiveNumber);
    flag(app, "--max-depth", max_depth, "Tree depth cap, or 'unlimited'");
    flag(app, "--min-samples-split", min_samples_split, "Smallest node that may be split")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    flag(app, "--features-per-split", features_per_split, "Features drawn per node, 1..17")
        ->check(CLI::Range(std::size_t{1}, kBlockFeatureCount));
    flag(app, "--train-fraction", train_fraction, "Stratified training share, (0,1)")
        ->check(CLI::Range(0.0, 1.0));
    flag(app, "--byte-source", byte_source, "Bytes used as features 1..16: plaintext (post-fault) or ciphertext")
        ->check(CLI::IsMember({"plaintext", "ciphertext"}));
    flag(app, "--train-threads", threads, "Threads used to fit trees (0 = all cores); results are unaffected");
  }

  ForestHyperparams to_hyper(std::uint64_t seed) const {
    ForestHyperparams h;
    h.n_trees = trees;
    if (max_depth == "unlimited") {
      h.max_depth = std::nullopt;
    } else {
      std::size_t depth = 0;
      const auto res = std::from_chars(max_depth.data(), max_depth.data() + max_depth.size(), depth);
      if (res.ec != std::errc{} || res.ptr != max_depth.data() + max_depth.size()) {
        throw UsageError("--max-depth must be a non-negative integer or 'unlimited'");
      }
      h.max_depth = depth;
    }
    h.min_samples_split = min_samples_split;
    h.features_per_split = features_per_split;
    h.train_fraction = train_fraction;
    h.seed = seed;
    h.threads = threads;
    try {
      h.validate(kBlockFeatureCount);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return h;
  }

  ByteSource source() const { return *parse_byte_source(byte_source); }
};

void print_report_table(std::ostream& out, const std::vector<const DetectionReport*>& reports) {
  out << std::left << std::setw(10) << "detector" << std::right << std::setw(7) << "tp" << std::setw(7) << "fp"
      << std::setw(7) << "fn" << std::setw(7) << "tn" << std::setw(10) << "accuracy" << std::setw(10) << "precision"
      << std::setw(9) << "recall" << std::setw(9) << "f1" << '\n';
  for (const auto* r : reports) {
    out << std::left << std::setw(10) << to_string(r->detector) << std::right << std::setw(7) << r->counts.tp
        << std::setw(7) << r->counts.fp << std::setw(7) << r->counts.fn << std::setw(7) << r->counts.tn
        << std::setw(10) << csv::fixed(r->accuracy, 4) << std::setw(10) << csv::fixed(r->precision, 4)
        << std::setw(9) << csv::fixed(r->recall, 4) << std::setw(9) << csv::fixed(r->f1, 4) << '\n';
  }
}

int cmd_run(const RunFlags& rf, const ForestFlags& ff, const std::string& out_dir, const std::string& threshold_fit,
            std::ostream& out) {
  ExperimentConfig cfg;
  cfg.run = rf.to_config();
  cfg.key = rf.key();
  cfg.forest = ff.to_hyper(cfg.run.seed);
  cfg.byte_source = ff.source();
  cfg.threshold_fit = *parse_threshold_fit(threshold_fit);

  const auto result = run_experiment(cfg);
  const auto paths = export_csv(result, cfg, out_dir);

  const auto& run = cfg.run;
  std::size_t malicious = 0;
  for (const auto& r : result.records) malicious += r.truth_label() ? 1 : 0;
  out << "run " << run_id(run) << ": " << run.n_blocks << " blocks, " << malicious << " injected ("
      << csv::fixed(run.inject_pct, 1) << "% target), mode " << to_string(run.mode) << ", " << run.workers
      << " worker(s), input " << to_string(run.input_dist) << ", features " << to_string(cfg.byte_source) << '\n';
  out << "threshold T = " << csv::fixed(result.threshold.threshold_us, 3) << " us (mean "
      << csv::fixed(result.threshold.mean_us, 3) << ", range " << csv::fixed(result.threshold.min_us, 3) << ".."
      << csv::fixed(result.threshold.max_us, 3) << ", fitted on " << to_string(cfg.threshold_fit) << ", n="
      << result.threshold.n << ")\n";
  out << "forest: " << result.forest.trees().size() << " trees, trained on " << result.split.train.size()
      << " blocks; both detectors scored on " << result.split.test.size() << " held-out blocks\n\n";
  print_report_table(out, {&result.threshold_report, &result.forest_report});
  const auto& c = result.comparison;
  out << "\naccuracy gain (forest - threshold): " << (c.accuracy_gain >= 0 ? "+" : "")
      << csv::fixed(c.accuracy_gain, 4) << '\n';
  out << "FP/FN  threshold " << c.threshold_fp << "/" << c.threshold_fn << "  forest " << c.forest_fp << "/"
      << c.forest_fn << '\n';
  out << "wrote " << paths.blocks.string() << '\n' << "wrote " << paths.summary.string() << '\n';
  return 0;
}

int cmd_kat(std::ostream& out) {
  const auto result = run_known_answer_suite(out);
  return result.passed() ? 0 : kExitFailure;
}

int cmd_bench(const RunFlags& rf, const std::vector<std::size_t>& block_counts,
              const std::vector<unsigned>& worker_counts, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  const RunConfig base = rf.to_config();
  const auto records = sweep(block_counts, worker_counts, base, rf.key());

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory '" + out_dir + "': " + ec.message());
  const auto path = std::filesystem::path(out_dir) / bench_file_name();
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  write_bench_csv(file, records);
  file.flush();
  if (!file) throw Error(ErrorKind::kIo, "write failed for '" + path.string() + "'");

  out << std::right << std::setw(8) << "blocks" << std::setw(9) << "workers" << std::setw(14) << "latency_us"
      << std::setw(14) << "blocks/s" << std::setw(12) << "peak_MiB" << std::setw(12) << "wall_s" << '\n';
  bool all_ok = true;
  for (const auto& r : records) {
    out << std::setw(8) << r.block_count << std::setw(9) << r.workers;
    if (!r.ok()) {
      all_ok = false;
      out << "  FAILED: " << r.error << '\n';
      err << "bench cell " << r.block_count << "x" << r.workers << " failed: " << r.error << '\n';
      continue;
    }
    out << std::setw(14) << csv::fixed(r.mean_latency_us, 3) << std::setw(14) << csv::fixed(r.throughput_bps, 2)
        << std::setw(12) << (r.peak_memory_mb ? csv::fixed(*r.peak_memory_mb, 1) : std::string("n/a"))
        << std::setw(12) << csv::fixed(r.wall_time_s, 4) << '\n';
  }
  out << "wrote " << path.string() << '\n';
  return all_ok ? 0 : kExitFailure;
}

double training_accuracy(const ForestModel& model, const Dataset& data, std::span<const std::size_t> rows) {
  std::size_t hits = 0;
  for (std::size_t r : rows) hits += model.predict(data.row(r)) == data.label(r) ? 1 : 0;
  return rows.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rows.size());
}

int cmd_train(const RunFlags& rf, const ForestFlags& ff, const std::string& input, const std::string& model_path,
              std::ostream& out) {
  ForestModel model;
  if (!input.empty()) {
    const auto rows = read_blocks_csv(std::filesystem::path(input));
    if (rows.empty()) throw Error(ErrorKind::kEmptySample, "'" + input + "' has no data rows");
    for (const auto& row : rows) {
      if (!row.truth_label) throw UsageError("training CSV needs a truth_label value on every row");
    }
    const Dataset data = dataset_from_rows(rows);
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    model = fit_forest(data, all, ff.to_hyper(rf.seed), ff.source());
    out << "trained " << model.trees().size() << " trees on " << data.size() << " rows from " << input
        << "; training accuracy " << csv::fixed(training_accuracy(model, data, all), 6) << '\n';
  } else {
    const RunConfig run = rf.to_config();
    const auto records = run_pipeline(run, rf.key());
    const Dataset data = build_dataset(records, ff.source());
    const auto hyper = ff.to_hyper(run.seed);
    const auto split = split_train_test(data, hyper.train_fraction, run.seed);
    model = fit_forest(data, split.train, hyper, ff.source());
    const auto report = score(model.predict(data, split.test), [&] {
      std::vector<bool> t;
      for (std::size_t r : split.test) t.push_back(data.label(r));
      return t;
    }(), Detector::kForest);
    out << "trained " << model.trees().size() << " trees on " << split.train.size() << " live blocks ("
        << run_id(run) << "); training accuracy " << csv::fixed(training_accuracy(model, data, split.train), 6)
        << ", held-out accuracy " << csv::fixed(report.accuracy, 6) << '\n';
  }

  std::ofstream file(model_path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, "cannot open '" + model_path + "' for writing");
  save_model(model, file);
  file.flush();
  if (!file) throw Error(ErrorKind::kIo, "write failed for '" + model_path + "'");
  out << "wrote " << model_path << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input, const std::string& output,
                std::ostream& out) {
  std::ifstream model_file(model_path, std::ios::binary);
  if (!model_file) throw Error(ErrorKind::kIo, "cannot open '" + model_path + "' for reading");
  const ForestModel model = load_model(model_file);

  const auto rows = read_blocks_csv(std::filesystem::path(input));
  const Dataset data = dataset_from_rows(rows);
  const auto predictions = model.predict(data);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!output.empty()) {
    file.open(output, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::kIo, "cannot open '" + output + "' for writing");
    sink = &file;
  }
  csv::write_row(*sink, {"index", "forest_pred"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv::write_row(*sink, {std::to_string(rows[i].index), predictions[i] ? "1" : "0"});
  }
  if (file.is_open()) {
    file.flush();
    if (!file) throw Error(ErrorKind::kIo, "write failed for '" + output + "'");
    out << "wrote " << rows.size() << " predictions to " << output << '\n';
  }

  const bool labelled = !rows.empty() && std::all_of(rows.begin(), rows.end(),
                                                     [](const BlockRow& r) { return r.truth_label.has_value(); });
  if (labelled) {
    std::vector<bool> truths;
    for (const auto& r : rows) truths.push_back(*r.truth_label);
    const auto report = score(predictions, truths, Detector::kForest);
    std::ostringstream table;
    print_report_table(table, {&report});
    std::istringstream lines(table.str());
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"AES-128-ECB anomaly injection and detection lab"};
  app.name("aesguard");
  app.require_subcommand(1, 1);

  RunFlags run_flags;
  ForestFlags forest_flags;
  std::string out_dir = "out";
  std::string threshold_fit = "all";

  auto* run = app.add_subcommand("run", "Inject, encrypt, detect with both detectors and export CSVs");
  run_flags.attach(run);
  forest_flags.attach(run);
  flag(run, "--threshold-fit", threshold_fit, "Timing population for the threshold: all blocks or train split")
      ->check(CLI::IsMember({"all", "train"}));
  flag(run, "--out-dir", out_dir, "Directory for blocks_<runid>.csv and summary_<runid>.csv");

  app.add_subcommand("kat", "Run the AES-128 known-answer vectors");

  RunFlags bench_flags;
  bench_flags.mode = "real";
  bench_flags.inject_pct = 0.0;
  std::vector<std::size_t> block_counts = {1024, 4096, 8192, 16384};
  std::vector<unsigned> worker_counts = {1, 2, 4};
  std::string bench_dir = "out";
  auto* bench = app.add_subcommand("bench", "Latency / throughput / peak-memory sweep");
  bench_flags.attach(bench);
  flag(bench, "--block-counts", block_counts, "Block counts to sweep")->delimiter(',');
  flag(bench, "--worker-counts", worker_counts, "Worker counts to sweep")->delimiter(',');
  flag(bench, "--out-dir", bench_dir, "Directory for bench_<timestamp>.csv");

  RunFlags train_flags;
  ForestFlags train_forest;
  std::string train_input;
  std::string model_out = "model.txt";
  auto* train = app.add_subcommand("train", "Fit a forest on a per-block CSV (or a live run) and save it");
  train_flags.attach(train);
  train_forest.attach(train);
  flag(train, "--input", train_input, "Per-block CSV with truth labels; omit to train on a live run");
  flag(train, "--model", model_out, "Output model file");

  std::string model_in = "model.txt";
  std::string predict_input;
  std::string predict_output;
  auto* predict = app.add_subcommand("predict", "Apply a saved forest to a per-block CSV");
  flag(predict, "--model", model_in, "Model file written by 'train'");
  flag(predict, "--input", predict_input, "Per-block CSV (time_us, feature_bytes_hex[, truth_label])")->required();
  flag(predict, "--output", predict_output, "Write predictions here instead of standard output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_flags, forest_flags, out_dir, threshold_fit, out);
    if (app.got_subcommand("kat")) return cmd_kat(out);
    if (*bench) return cmd_bench(bench_flags, block_counts, worker_counts, bench_dir, out, err);
    if (*train) return cmd_train(train_flags, train_forest, train_input, model_out, out);
    if (*predict) return cmd_predict(model_in, predict_input, predict_output, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace aesguard
