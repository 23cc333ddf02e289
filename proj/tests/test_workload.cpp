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

#include <set>

#include "aesguard/error.hpp"
#include "aesguard/rng.hpp"
#include "aesguard/workload.hpp"

using namespace aesguard;

TEST_CASE("generate_blocks returns n indexed 16-byte blocks") {
  const auto blocks = generate_blocks(3, InputDistribution::kUniformRandom, 11);
  REQUIRE(blocks.size() == 3);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(blocks[i].index == i);
    CHECK(blocks[i].bytes.size() == kBlockSize);
    CHECK(blocks[i].tag == AnomalyTag::none());
  }
  CHECK(blocks[0].bytes != blocks[1].bytes);
}

TEST_CASE("generate_blocks is deterministic per seed") {
  for (auto dist : {InputDistribution::kUniformRandom, InputDistribution::kStructuredAscii}) {
    CHECK(generate_blocks(257, dist, 99) == generate_blocks(257, dist, 99));
    CHECK(generate_blocks(257, dist, 99) != generate_blocks(257, dist, 100));
  }
}

TEST_CASE("generate_blocks rejects an empty workload") {
  try {
    generate_blocks(0, InputDistribution::kUniformRandom, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyWorkload);
  }
}

TEST_CASE("structured-ascii bytes stay within 0x20..0x7E") {
  const auto blocks = generate_blocks(4096, InputDistribution::kStructuredAscii, 5);
  std::set<int> seen;
  for (const auto& b : blocks) {
    for (auto byte : b.bytes) {
      REQUIRE(byte >= 0x20);
      REQUIRE(byte <= 0x7E);
      seen.insert(byte);
    }
  }
  // 65536 draws over 95 symbols: every symbol appears.
  CHECK(seen.size() == 95);
}

TEST_CASE("uniform bytes cover the full byte range") {
  const auto blocks = generate_blocks(4096, InputDistribution::kUniformRandom, 5);
  std::set<int> seen;
  for (const auto& b : blocks) seen.insert(b.bytes.begin(), b.bytes.end());
  CHECK(seen.size() == 256);
}

TEST_CASE("assign_anomalies at the probability extremes") {
  const auto blocks = generate_blocks(500, InputDistribution::kUniformRandom, 3);
  InjectionPlan plan;

  plan.inject_pct = 0;
  for (const auto& b : assign_anomalies(blocks, plan, 3)) CHECK_FALSE(b.tag.anomalous());

  plan.inject_pct = 100;
  std::size_t delays = 0;
  for (const auto& b : assign_anomalies(blocks, plan, 3)) {
    REQUIRE(b.tag.anomalous());
    if (b.tag.kind == AnomalyKind::kDelay) {
      ++delays;
      CHECK(b.tag.delay_us >= plan.delay_min_us);
      CHECK(b.tag.delay_us <= plan.delay_max_us);
    }
  }
  CHECK(delays > 0);
  CHECK(delays < 500);
}

TEST_CASE("assign_anomalies keeps bytes and indices untouched") {
  const auto blocks = generate_blocks(64, InputDistribution::kUniformRandom, 3);
  InjectionPlan plan;
  plan.inject_pct = 100;
  const auto tagged = assign_anomalies(blocks, plan, 8);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(tagged[i].index == blocks[i].index);
    CHECK(tagged[i].bytes == blocks[i].bytes);
  }
}

TEST_CASE("injection fraction concentrates around inject_pct") {
  // Binomial(16384, 0.5) has sd 64; +-2 percentage points is ~5 sd.
  const auto blocks = generate_blocks(16384, InputDistribution::kUniformRandom, 21);
  InjectionPlan plan;
  plan.inject_pct = 50;
  std::size_t hit = 0;
  for (const auto& b : assign_anomalies(blocks, plan, 21)) hit += b.tag.anomalous();
  const double pct = 100.0 * static_cast<double>(hit) / 16384.0;
  CHECK(pct >= 48.0);
  CHECK(pct <= 52.0);
}

TEST_CASE("delay/fault balance over many anomalous assignments") {
  const auto blocks = generate_blocks(12000, InputDistribution::kUniformRandom, 4);
  InjectionPlan plan;
  plan.inject_pct = 100;
  std::size_t delays = 0;
  for (const auto& b : assign_anomalies(blocks, plan, 4)) delays += b.tag.kind == AnomalyKind::kDelay;
  const double frac = static_cast<double>(delays) / 12000.0;
  CHECK(frac >= 0.45);
  CHECK(frac <= 0.55);
}

TEST_CASE("schedule determinism and mix restriction") {
  const auto blocks = generate_blocks(2000, InputDistribution::kUniformRandom, 9);
  InjectionPlan plan;
  plan.inject_pct = 40;
  CHECK(assign_anomalies(blocks, plan, 77) == assign_anomalies(blocks, plan, 77));

  auto faults = plan;
  faults.mix = AnomalyMix::kFaultOnly;
  auto delays = plan;
  delays.mix = AnomalyMix::kDelayOnly;
  const auto both = assign_anomalies(blocks, plan, 77);
  const auto f = assign_anomalies(blocks, faults, 77);
  const auto d = assign_anomalies(blocks, delays, 77);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    // Same membership regardless of mix.
    CHECK(f[i].tag.anomalous() == both[i].tag.anomalous());
    CHECK(d[i].tag.anomalous() == both[i].tag.anomalous());
    if (f[i].tag.anomalous()) CHECK(f[i].tag.kind == AnomalyKind::kFault);
    if (d[i].tag.anomalous()) CHECK(d[i].tag.kind == AnomalyKind::kDelay);
  }
}

TEST_CASE("invalid injection plans are rejected") {
  const auto blocks = generate_blocks(4, InputDistribution::kUniformRandom, 1);
  InjectionPlan plan;
  plan.inject_pct = 120;
  CHECK_THROWS_AS(assign_anomalies(blocks, plan, 1), Error);
  plan.inject_pct = 10;
  plan.delay_min_us = 30;
  plan.delay_max_us = 20;
  CHECK_THROWS_AS(assign_anomalies(blocks, plan, 1), Error);
  plan.delay_min_us = 0;
  CHECK_THROWS_AS(assign_anomalies(blocks, plan, 1), Error);
}

TEST_CASE("apply_fault flips the first byte only") {
  Block b{};
  CHECK(apply_fault(b)[0] == 0xFF);
  b[0] = 0xAB;
  b[7] = 0x42;
  const Block f = apply_fault(b);
  CHECK(f[0] == 0x54);
  for (std::size_t i = 1; i < kBlockSize; ++i) CHECK(f[i] == b[i]);
}

TEST_CASE("apply_fault is an involution") {
  for (const auto& pb : generate_blocks(1000, InputDistribution::kUniformRandom, 13)) {
    REQUIRE(apply_fault(apply_fault(pb.bytes)) == pb.bytes);
    REQUIRE(apply_fault(apply_fault(pb)) == pb);
  }
}

TEST_CASE("normalize_block pads with zeros or truncates") {
  std::vector<std::uint8_t> raw(20);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::uint8_t>(i + 1);

  const Block truncated = normalize_block(raw);
  for (std::size_t i = 0; i < kBlockSize; ++i) CHECK(truncated[i] == i + 1);

  const Block padded = normalize_block(std::span(raw).first(10));
  for (std::size_t i = 0; i < 10; ++i) CHECK(padded[i] == i + 1);
  for (std::size_t i = 10; i < kBlockSize; ++i) CHECK(padded[i] == 0x00);

  const Block exact = normalize_block(std::span(raw).first(16));
  CHECK(exact == truncated);
  CHECK(normalize_block({}) == Block{});
}

TEST_CASE("Rng helpers stay in range") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const auto v = rng.between(3, 7);
    REQUIRE(v >= 3);
    REQUIRE(v <= 7);
  }
  CHECK(derive_seed(1, StreamDomain::kJitter, 0) != derive_seed(1, StreamDomain::kSchedule, 0));
  CHECK(derive_seed(1, StreamDomain::kJitter, 0) != derive_seed(1, StreamDomain::kJitter, 1));
}

TEST_CASE("enum spellings round-trip") {
  for (auto d : {InputDistribution::kUniformRandom, InputDistribution::kStructuredAscii}) {
    CHECK(parse_input_distribution(to_string(d)) == d);
  }
  for (auto m : {AnomalyMix::kBoth, AnomalyMix::kDelayOnly, AnomalyMix::kFaultOnly}) {
    CHECK(parse_anomaly_mix(to_string(m)) == m);
  }
  for (auto m : {TimingMode::kReal, TimingMode::kSimulated}) CHECK(parse_timing_mode(to_string(m)) == m);
  for (auto k : {AnomalyKind::kNone, AnomalyKind::kDelay, AnomalyKind::kFault}) CHECK(parse_anomaly_kind(to_string(k)) == k);
  CHECK_FALSE(parse_timing_mode("fast").has_value());
}
