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

#include <algorithm>
#include <cmath>

#include "aesguard/error.hpp"
#include "aesguard/metrics.hpp"
#include "aesguard/rng.hpp"

using namespace aesguard;

namespace {

std::vector<bool> repeat(std::initializer_list<std::pair<bool, std::size_t>> runs) {
  std::vector<bool> out;
  for (auto [v, n] : runs) out.insert(out.end(), n, v);
  return out;
}

// Hand-computed metrics straight from the definitions.
struct Manual {
  double accuracy, precision, recall, f1;
};

Manual manual(const std::vector<bool>& p, const std::vector<bool>& t) {
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] && t[i]) tp += 1;
    if (p[i] && !t[i]) fp += 1;
    if (!p[i] && t[i]) fn += 1;
    if (!p[i] && !t[i]) tn += 1;
  }
  Manual m{};
  m.accuracy = (tp + tn) / (tp + fp + fn + tn);
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f1 = tp > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
  return m;
}

}  // namespace

TEST_CASE("confusion counts and metrics for 8/2/2/8") {
  // 8 TP, 2 FN, 2 FP, 8 TN
  const auto truths = repeat({{true, 10}, {false, 10}});
  const auto preds = repeat({{true, 8}, {false, 2}, {true, 2}, {false, 8}});
  const auto r = score(preds, truths);
  CHECK(r.counts == ConfusionCounts{8, 2, 2, 8});
  CHECK(r.accuracy == doctest::Approx(0.8));
  CHECK(r.precision == doctest::Approx(0.8));
  CHECK(r.recall == doctest::Approx(0.8));
  CHECK(r.f1 == doctest::Approx(0.8));
  CHECK(false_positive_rate(r.counts) == doctest::Approx(0.2));
}

TEST_CASE("perfect and all-benign predictors") {
  const auto truths = repeat({{true, 5}, {false, 15}});
  const auto perfect = score(truths, truths);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  const auto benign = score(std::vector<bool>(20, false), truths);
  CHECK(benign.counts == ConfusionCounts{0, 0, 5, 15});
  CHECK(benign.precision == 0.0);
  CHECK(benign.recall == 0.0);
  CHECK(benign.f1 == 0.0);
  CHECK(benign.accuracy == doctest::Approx(0.75));

  const auto no_negatives = score(std::vector<bool>(4, true), std::vector<bool>(4, true));
  CHECK(false_positive_rate(no_negatives.counts) == 0.0);
}

TEST_CASE("score rejects mismatched or empty input") {
  try {
    score({true, false}, {true});
    FAIL("expected a shape error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kShape);
  }
  CHECK_THROWS_AS(score({}, {}), Error);
  CHECK_THROWS_AS(score({true}, {true}, Detector::kForest, {1, 2}), Error);
}

TEST_CASE("compare reports the accuracy gain and error counts") {
  const auto truths = repeat({{true, 10}, {false, 10}});
  const auto a = score(truths, truths, Detector::kThreshold);
  const auto same = compare(a, score(truths, truths, Detector::kForest));
  CHECK(same.accuracy_gain == 0.0);

  auto weak_preds = truths;
  for (std::size_t i = 0; i < 6; ++i) weak_preds[i] = false;  // 6 FN -> accuracy 0.7
  const auto weak = score(weak_preds, truths, Detector::kThreshold);
  const auto strong = score(truths, truths, Detector::kForest);
  const auto c = compare(weak, strong);
  CHECK(c.accuracy_gain == doctest::Approx(0.3));
  CHECK(c.threshold_fn == 6);
  CHECK(c.threshold_fp == 0);
  CHECK(c.forest_fn == 0);
  CHECK(compare(strong, weak).accuracy_gain == doctest::Approx(-0.3));
}

TEST_CASE("compare refuses reports on different subsets") {
  const auto truths = repeat({{true, 3}, {false, 3}});
  auto shifted = truths;
  shifted[0] = false;
  try {
    compare(score(truths, truths), score(truths, shifted));
    FAIL("expected a comparison error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kComparison);
  }
  const auto rows_a = score(truths, truths, Detector::kThreshold, {0, 1, 2, 3, 4, 5});
  const auto rows_b = score(truths, truths, Detector::kForest, {0, 1, 2, 3, 4, 6});
  CHECK_THROWS_AS(compare(rows_a, rows_b), Error);
}

TEST_CASE("recall_on counts only the requested tag") {
  std::vector<BlockRecord> recs(4);
  recs[0].tag = AnomalyTag::delay(6000);
  recs[1].tag = AnomalyTag::delay(7000);
  recs[2].tag = AnomalyTag::fault();
  const std::vector<bool> preds{true, false, true, true};
  CHECK(recall_on(recs, preds, AnomalyKind::kDelay) == doctest::Approx(0.5));
  CHECK(recall_on(recs, preds, AnomalyKind::kFault) == 1.0);
  CHECK(recall_on(std::span(recs).first(2), {true, true}, AnomalyKind::kFault) == 0.0);
}

TEST_CASE("metric properties on random label vectors") {
  Rng rng(900);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(300);
    const double p_pos = rng.unit();
    const double p_flip = rng.unit();
    std::vector<bool> truths(n), preds(n);
    for (std::size_t i = 0; i < n; ++i) {
      truths[i] = rng.unit() < p_pos;
      preds[i] = rng.unit() < p_flip ? !truths[i] : truths[i];
    }
    const auto r = score(preds, truths);
    REQUIRE(r.counts.total() == n);
    REQUIRE(r.counts.tp + r.counts.fn == static_cast<std::size_t>(std::count(truths.begin(), truths.end(), true)));
    for (double m : {r.accuracy, r.precision, r.recall, r.f1}) {
      REQUIRE(m >= 0.0);
      REQUIRE(m <= 1.0);
    }
    const auto expect = manual(preds, truths);
    REQUIRE(std::abs(r.accuracy - expect.accuracy) <= 1e-12);
    REQUIRE(std::abs(r.precision - expect.precision) <= 1e-12);
    REQUIRE(std::abs(r.recall - expect.recall) <= 1e-12);
    REQUIRE(std::abs(r.f1 - expect.f1) <= 1e-12);

    // Applying the same permutation to both vectors changes nothing.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<bool> pt(n), pp(n);
    for (std::size_t i = 0; i < n; ++i) {
      pt[i] = truths[perm[i]];
      pp[i] = preds[perm[i]];
    }
    const auto q = score(pp, pt);
    REQUIRE(q.counts == r.counts);
    REQUIRE(q.f1 == r.f1);
    REQUIRE(q.accuracy == r.accuracy);
  }
}
