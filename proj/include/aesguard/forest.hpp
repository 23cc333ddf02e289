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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aesguard/pipeline.hpp"
#include "aesguard/rng.hpp"

namespace aesguard {

// Feature 0 is the block time in microseconds, features 1..16 the block bytes.
inline constexpr std::size_t kBlockFeatureCount = 1 + kBlockSize;

// Which bytes feed features 1..16.
enum class ByteSource {
  kPlaintext,   // post-fault plaintext, i.e. what was encrypted
  kCiphertext,  // the AES output
};

std::string_view to_string(ByteSource s) noexcept;
std::optional<ByteSource> parse_byte_source(std::string_view s) noexcept;

// Dense row-major feature table with binary labels (true = malicious).
class Dataset {
 public:
  explicit Dataset(std::size_t n_features) : n_features_(n_features) {}

  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  // Throws Error(kShape) if values.size() != n_features().
  void add(std::span<const double> values, bool label);

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n_features_, n_features_};
  }
  double at(std::size_t i, std::size_t feature) const noexcept { return values_[i * n_features_ + feature]; }
  bool label(std::size_t i) const noexcept { return labels_[i] != 0; }

  // Rows in the order given (duplicates allowed).
  Dataset subset(std::span<const std::size_t> rows) const;

  std::array<std::size_t, 2> class_counts() const noexcept;

 private:
  std::size_t n_features_;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
};

// One row per record in index order; label = truth label.
// Throws Error(kEmptySample) for an empty input.
Dataset build_dataset(std::span<const BlockRecord> records, ByteSource source = ByteSource::kPlaintext);

struct TrainTestSplit {
  std::vector<std::size_t> train;  // ascending row indices
  std::vector<std::size_t> test;   // ascending row indices
};

// Stratified by label: each class contributes round(fraction * count) rows to
// train, clamped so both partitions keep at least one row of that class.
// Throws Error(kStratification) when a present class has fewer than 2 rows.
TrainTestSplit split_train_test(const Dataset& data, double train_fraction, std::uint64_t seed);

// Index 0 counts benign samples, index 1 malicious ones.
using ClassCounts = std::array<std::size_t, 2>;

// 1 - sum p_c^2; 0 for an empty set.
double gini(const ClassCounts& counts) noexcept;

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;  // value <= threshold goes left
  double gain = 0.0;
};

// Exhaustive CART split search over `candidate_features`, thresholds at
// midpoints of consecutive distinct values. Gains are compared exactly, so
// equal-gain ties go to the lowest feature and then the lowest threshold.
// Returns nullopt when no split has strictly positive gain.
std::optional<SplitChoice> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                      std::span<const std::size_t> candidate_features);

struct ForestHyperparams {
  std::size_t n_trees = 101;
  std::optional<std::size_t> max_depth = 16;  // nullopt = unlimited
  std::size_t min_samples_split = 2;
  std::size_t features_per_split = 5;
  std::uint64_t seed = 42;
  double train_fraction = 0.7;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  // Throws Error(kConfig) on out-of-range values for `n_features`.
  void validate(std::size_t n_features) const;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  ClassCounts counts{};  // training samples that reached this node

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  // Majority class of the reached leaf; a tied leaf votes benign.
  bool predict(std::span<const double> features) const noexcept;

  // Nodes in pre-order, root first.
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const noexcept;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

// Recursive CART on the given rows (duplicates allowed, as from a bootstrap).
DecisionTree fit_tree(const Dataset& data, std::span<const std::size_t> rows, const ForestHyperparams& hyper,
                      Rng& rng);

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(ForestHyperparams hyper, std::size_t n_features, ByteSource source, std::vector<DecisionTree> trees)
      : hyper_(hyper), n_features_(n_features), byte_source_(source), trees_(std::move(trees)) {}

  // Majority vote; a tied vote is benign. Throws Error(kShape) on a
  // dimension mismatch.
  bool predict(std::span<const double> features) const;
  std::vector<bool> predict(const Dataset& data) const;
  std::vector<bool> predict(const Dataset& data, std::span<const std::size_t> rows) const;

  std::size_t tree_votes(std::span<const double> features) const;

  const ForestHyperparams& hyper() const noexcept { return hyper_; }
  std::size_t n_features() const noexcept { return n_features_; }
  ByteSource byte_source() const noexcept { return byte_source_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

 private:
  ForestHyperparams hyper_;
  std::size_t n_features_ = 0;
  ByteSource byte_source_ = ByteSource::kPlaintext;
  std::vector<DecisionTree> trees_;
};

// Bagged CART ensemble. Tree t trains on a bootstrap of size |rows| drawn
// from the stream keyed on (hyper.seed, t).
// Throws Error(kDegenerateTraining) unless both classes are present.
ForestModel fit_forest(const Dataset& train, const ForestHyperparams& hyper,
                       ByteSource source = ByteSource::kPlaintext);
ForestModel fit_forest(const Dataset& data, std::span<const std::size_t> rows, const ForestHyperparams& hyper,
                       ByteSource source = ByteSource::kPlaintext);

// Text model format:
//   aesguard-forest 1
//   key value lines for the hyperparameters
//   per tree: "tree <i> <node-count>" then pre-order "S <feature> <threshold>"
//   or "L <benign> <malicious>" lines; closes with "end".
void save_model(const ForestModel& model, std::ostream& out);
// Throws Error(kModelFormat) on a version mismatch or malformed input.
ForestModel load_model(std::istream& in);

}  // namespace aesguard
