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

#include "aesguard/forest.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "aesguard/error.hpp"

namespace aesguard {

std::string_view to_string(ByteSource s) noexcept {
  return s == ByteSource::kCiphertext ? "ciphertext" : "plaintext";
}

std::optional<ByteSource> parse_byte_source(std::string_view s) noexcept {
  if (s == "plaintext") return ByteSource::kPlaintext;
  if (s == "ciphertext") return ByteSource::kCiphertext;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dataset

void Dataset::add(std::span<const double> values, bool label) {
  if (values.size() != n_features_) {
    throw Error(ErrorKind::kShape, "row has " + std::to_string(values.size()) + " features, expected " +
                                       std::to_string(n_features_));
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label ? 1 : 0);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(n_features_);
  out.values_.reserve(rows.size() * n_features_);
  out.labels_.reserve(rows.size());
  for (std::size_t r : rows) out.add(row(r), label(r));
  return out;
}

std::array<std::size_t, 2> Dataset::class_counts() const noexcept {
  std::array<std::size_t, 2> counts{};
  for (auto l : labels_) ++counts[l];
  return counts;
}

Dataset build_dataset(std::span<const BlockRecord> records, ByteSource source) {
  if (records.empty()) throw Error(ErrorKind::kEmptySample, "cannot build a dataset from zero records");
  std::vector<const BlockRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const BlockRecord* a, const BlockRecord* b) { return a->index < b->index; });

  Dataset data(kBlockFeatureCount);
  std::array<double, kBlockFeatureCount> row{};
  for (const BlockRecord* r : ordered) {
    const Block& bytes = source == ByteSource::kCiphertext ? r->ciphertext : r->plaintext_effective;
    row[0] = r->time_us;
    for (std::size_t i = 0; i < kBlockSize; ++i) row[1 + i] = bytes[i];
    data.add(row, r->truth_label());
  }
  return data;
}

TrainTestSplit split_train_test(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "train_fraction must lie in (0, 1)");
  }
  TrainTestSplit split;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.label(i) == (cls == 1)) members.push_back(i);
    }
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw Error(ErrorKind::kStratification,
                  std::string(cls ? "malicious" : "benign") + " class has fewer than 2 samples");
    }
    Rng rng(seed, StreamDomain::kSplit, static_cast<std::uint64_t>(cls));
    for (std::size_t i = members.size() - 1; i > 0; --i) {
      std::swap(members[i], members[rng.below(i + 1)]);
    }
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
    split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

// ---------------------------------------------------------------------------
// Split search

double gini(const ClassCounts& counts) noexcept {
  const double total = static_cast<double>(counts[0] + counts[1]);
  if (total == 0.0) return 0.0;
  const double p0 = counts[0] / total;
  const double p1 = counts[1] / total;
  return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

using Wide = unsigned __int128;

Wide square(std::size_t x) { return static_cast<Wide>(x) * x; }

// Sum over children of (sum_c n_c^2) / n_child is a monotone transform of
// the Gini gain; kept as an exact fraction num/den.
struct Purity {
  Wide num;
  Wide den;

  bool better_than(const Purity& other) const { return num * other.den > other.num * den; }
};

double split_gain(const ClassCounts& parent, const ClassCounts& left) {
  const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
  const double n = static_cast<double>(parent[0] + parent[1]);
  const double nl = static_cast<double>(left[0] + left[1]);
  const double nr = n - nl;
  return gini(parent) - (nl / n) * gini(left) - (nr / n) * gini(right);
}

double midpoint_threshold(double lo, double hi) {
  const double mid = std::midpoint(lo, hi);
  // Adjacent doubles can round the midpoint up to hi, which would send hi left.
  return mid < hi ? mid : lo;
}

}  // namespace

std::optional<SplitChoice> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                      std::span<const std::size_t> candidate_features) {
  ClassCounts parent{};
  for (std::size_t r : rows) ++parent[data.label(r) ? 1 : 0];
  const std::size_t n = rows.size();
  if (n < 2 || parent[0] == 0 || parent[1] == 0) return std::nullopt;

  std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  Purity best{square(parent[0]) + square(parent[1]), n};
  std::optional<SplitChoice> choice;
  ClassCounts best_left{};

  std::vector<std::pair<double, std::uint8_t>> column(n);
  for (std::size_t f : features) {
    if (f >= data.n_features()) {
      throw Error(ErrorKind::kShape, "candidate feature " + std::to_string(f) + " out of range");
    }
    for (std::size_t i = 0; i < n; ++i) column[i] = {data.at(rows[i], f), data.label(rows[i]) ? 1 : 0};
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ClassCounts left{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[column[i].second];
      if (column[i].first == column[i + 1].first) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
      const Purity candidate{(square(left[0]) + square(left[1])) * nr + (square(right[0]) + square(right[1])) * nl,
                             static_cast<Wide>(nl) * nr};
      if (candidate.better_than(best)) {
        best = candidate;
        best_left = left;
        choice = SplitChoice{f, midpoint_threshold(column[i].first, column[i + 1].first), 0.0};
      }
    }
  }
  if (choice) choice->gain = split_gain(parent, best_left);
  return choice;
}

// ---------------------------------------------------------------------------
// Trees

void ForestHyperparams::validate(std::size_t n_features) const {
  if (n_trees < 1) throw Error(ErrorKind::kConfig, "n_trees must be >= 1");
  if (features_per_split < 1 || features_per_split > n_features) {
    throw Error(ErrorKind::kConfig, "features_per_split must lie in [1, " + std::to_string(n_features) + "]");
  }
  if (min_samples_split < 2) throw Error(ErrorKind::kConfig, "min_samples_split must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "train_fraction must lie in (0, 1)");
  }
}

bool DecisionTree::predict(std::span<const double> features) const noexcept {
  if (nodes_.empty()) return false;
  std::uint32_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const TreeNode& node = nodes_[at];
    at = features[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[at].counts[1] > nodes_[at].counts[0];
}

std::size_t DecisionTree::depth() const noexcept {
  if (nodes_.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[at].is_leaf()) {
      stack.emplace_back(nodes_[at].left, d + 1);
      stack.emplace_back(nodes_[at].right, d + 1);
    }
  }
  return deepest;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::span<const std::size_t> rows, const ForestHyperparams& hyper, Rng& rng)
      : data_(data), hyper_(hyper), rng_(rng), rows_(rows.begin(), rows.end()), pool_(data.n_features()) {
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
  }

  DecisionTree build() {
    if (!rows_.empty()) grow(0, rows_.size(), 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  std::uint32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
    TreeNode node;
    for (std::size_t i = begin; i < end; ++i) ++node.counts[data_.label(rows_[i]) ? 1 : 0];
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(node);

    const std::size_t n = end - begin;
    const bool depth_ok = !hyper_.max_depth || depth < *hyper_.max_depth;
    const bool impure = node.counts[0] > 0 && node.counts[1] > 0;
    if (!depth_ok || n < hyper_.min_samples_split || !impure) return id;

    const auto split = best_split(data_, std::span(rows_).subspan(begin, n), draw_features());
    if (!split) return id;

    const auto first = rows_.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto last = rows_.begin() + static_cast<std::ptrdiff_t>(end);
    const auto mid = std::stable_partition(
        first, last, [&](std::size_t r) { return data_.at(r, split->feature) <= split->threshold; });
    const std::size_t cut = static_cast<std::size_t>(mid - rows_.begin());

    nodes_[id].feature = static_cast<std::int32_t>(split->feature);
    nodes_[id].threshold = split->threshold;
    const std::uint32_t left = grow(begin, cut, depth + 1);
    nodes_[id].left = left;
    const std::uint32_t right = grow(cut, end, depth + 1);
    nodes_[id].right = right;
    return id;
  }

  // k distinct features by partial Fisher-Yates, returned ascending.
  std::vector<std::size_t> draw_features() {
    const std::size_t k = std::min(hyper_.features_per_split, pool_.size());
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool_[i], pool_[i + rng_.below(pool_.size() - i)]);
    }
    std::vector<std::size_t> picked(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  const Dataset& data_;
  const ForestHyperparams& hyper_;
  Rng& rng_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> pool_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree fit_tree(const Dataset& data, std::span<const std::size_t> rows, const ForestHyperparams& hyper,
                      Rng& rng) {
  return TreeBuilder(data, rows, hyper, rng).build();
}

// ---------------------------------------------------------------------------
// Forest

std::size_t ForestModel::tree_votes(std::span<const double> features) const {
  if (features.size() != n_features_) {
    throw Error(ErrorKind::kShape, "expected " + std::to_string(n_features_) + " features, got " +
                                       std::to_string(features.size()));
  }
  std::size_t votes = 0;
  for (const auto& tree : trees_) votes += tree.predict(features) ? 1 : 0;
  return votes;
}

bool ForestModel::predict(std::span<const double> features) const {
  const std::size_t votes = tree_votes(features);
  return votes > trees_.size() - votes;
}

std::vector<bool> ForestModel::predict(const Dataset& data) const {
  std::vector<bool> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict(data.row(i));
  return out;
}

std::vector<bool> ForestModel::predict(const Dataset& data, std::span<const std::size_t> rows) const {
  std::vector<bool> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = predict(data.row(rows[i]));
  return out;
}

ForestModel fit_forest(const Dataset& data, std::span<const std::size_t> rows, const ForestHyperparams& hyper,
                       ByteSource source) {
  hyper.validate(data.n_features());
  ClassCounts counts{};
  for (std::size_t r : rows) ++counts[data.label(r) ? 1 : 0];
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(ErrorKind::kDegenerateTraining, "training set must contain both benign and malicious samples");
  }

  std::vector<DecisionTree> trees(hyper.n_trees);
  auto fit_one = [&](std::size_t t) {
    Rng rng(hyper.seed, StreamDomain::kTree, t);
    std::vector<std::size_t> bootstrap(rows.size());
    for (auto& b : bootstrap) b = rows[rng.below(rows.size())];
    trees[t] = fit_tree(data, bootstrap, hyper, rng);
  };

  unsigned threads = hyper.threads ? hyper.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, hyper.n_trees));
  if (threads <= 1) {
    for (std::size_t t = 0; t < hyper.n_trees; ++t) fit_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
          try {
            for (std::size_t t; (t = next.fetch_add(1)) < hyper.n_trees;) fit_one(t);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return ForestModel(hyper, data.n_features(), source, std::move(trees));
}

ForestModel fit_forest(const Dataset& train, const ForestHyperparams& hyper, ByteSource source) {
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_forest(train, rows, hyper, source);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kMagic = "aesguard-forest";
constexpr int kFormatVersion = 1;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::kModelFormat, what); }

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(std::string_view expect_key) {
    std::string key;
    auto fields = next_any(key);
    if (key != expect_key) {
      malformed("line " + std::to_string(line_no_) + ": expected '" + std::string(expect_key) + "', found '" +
                key + "'");
    }
    return fields;
  }

  std::istringstream next_any(std::string& key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) break;
    }
    if (!in_ && line.empty()) malformed("unexpected end of model file");
    std::istringstream fields(line);
    key.clear();
    fields >> key;
    return fields;
  }

  template <typename T>
  T value(std::string_view key) {
    auto fields = next(key);
    std::string token;
    fields >> token;
    return parse<T>(token, key);
  }

  template <typename T>
  T parse(const std::string& token, std::string_view key) const {
    T out{};
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
      malformed("line " + std::to_string(line_no_) + ": bad value '" + token + "' for " + std::string(key));
    }
    return out;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void save_model(const ForestModel& model, std::ostream& out) {
  const auto& h = model.hyper();
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "n_features " << model.n_features() << '\n';
  out << "byte_source " << to_string(model.byte_source()) << '\n';
  out << "n_trees " << h.n_trees << '\n';
  out << "max_depth " << (h.max_depth ? std::to_string(*h.max_depth) : std::string("unlimited")) << '\n';
  out << "min_samples_split " << h.min_samples_split << '\n';
  out << "features_per_split " << h.features_per_split << '\n';
  out << "seed " << h.seed << '\n';
  out << "train_fraction " << format_double(h.train_fraction) << '\n';
  for (std::size_t t = 0; t < model.trees().size(); ++t) {
    const auto& nodes = model.trees()[t].nodes();
    out << "tree " << t << ' ' << nodes.size() << '\n';
    for (const auto& node : nodes) {
      if (node.is_leaf()) {
        out << "L " << node.counts[0] << ' ' << node.counts[1] << '\n';
      } else {
        out << "S " << node.feature << ' ' << format_double(node.threshold) << ' ' << node.counts[0] << ' '
            << node.counts[1] << '\n';
      }
    }
  }
  out << "end\n";
}

ForestModel load_model(std::istream& in) {
  LineReader reader(in);
  {
    auto header = reader.next(kMagic);
    std::string version;
    header >> version;
    if (version != std::to_string(kFormatVersion)) {
      malformed("unsupported model version '" + version + "', this build reads version " +
                std::to_string(kFormatVersion));
    }
  }
  ForestHyperparams h;
  const auto n_features = reader.value<std::size_t>("n_features");
  if (n_features == 0) malformed("n_features must be positive");
  ByteSource source;
  {
    auto fields = reader.next("byte_source");
    std::string token;
    fields >> token;
    const auto parsed = parse_byte_source(token);
    if (!parsed) malformed("unknown byte_source '" + token + "'");
    source = *parsed;
  }
  h.n_trees = reader.value<std::size_t>("n_trees");
  {
    auto fields = reader.next("max_depth");
    std::string token;
    fields >> token;
    h.max_depth = token == "unlimited" ? std::nullopt
                                       : std::optional<std::size_t>(reader.parse<std::size_t>(token, "max_depth"));
  }
  h.min_samples_split = reader.value<std::size_t>("min_samples_split");
  h.features_per_split = reader.value<std::size_t>("features_per_split");
  h.seed = reader.value<std::uint64_t>("seed");
  h.train_fraction = reader.value<double>("train_fraction");

  std::vector<DecisionTree> trees;
  trees.reserve(h.n_trees);
  for (std::size_t t = 0; t < h.n_trees; ++t) {
    auto header = reader.next("tree");
    std::size_t id = 0, count = 0;
    if (!(header >> id >> count) || id != t || count == 0) malformed("bad tree header for tree " + std::to_string(t));

    std::vector<TreeNode> nodes(count);
    // Pre-order: a node's left child immediately follows it; the right child
    // follows the whole left subtree.
    std::size_t cursor = 0;
    auto read_subtree = [&](auto&& self) -> std::uint32_t {
      if (cursor >= count) malformed("tree " + std::to_string(t) + " ends early");
      const auto at = static_cast<std::uint32_t>(cursor++);
      std::string kind;
      auto fields = reader.next_any(kind);
      TreeNode& node = nodes[at];
      if (kind == "L") {
        if (!(fields >> node.counts[0] >> node.counts[1])) malformed("bad leaf at line " + std::to_string(reader.line_no()));
        if (node.counts[0] + node.counts[1] == 0) malformed("empty leaf at line " + std::to_string(reader.line_no()));
        return at;
      }
      if (kind != "S") malformed("unknown node kind '" + kind + "' at line " + std::to_string(reader.line_no()));
      std::string threshold;
      if (!(fields >> node.feature >> threshold >> node.counts[0] >> node.counts[1]) || node.feature < 0 ||
          static_cast<std::size_t>(node.feature) >= n_features) {
        malformed("bad split at line " + std::to_string(reader.line_no()));
      }
      node.threshold = reader.parse<double>(threshold, "threshold");
      const std::uint32_t left = self(self);
      nodes[at].left = left;
      const std::uint32_t right = self(self);
      nodes[at].right = right;
      return at;
    };
    read_subtree(read_subtree);
    if (cursor != count) malformed("tree " + std::to_string(t) + " has trailing nodes");
    trees.emplace_back(std::move(nodes));
  }
  reader.next("end");
  return ForestModel(h, n_features, source, std::move(trees));
}

}  // namespace aesguard
