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

#include "aesguard/workload.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aesguard/error.hpp"
#include "aesguard/rng.hpp"

namespace aesguard {

void InjectionPlan::validate() const {
  if (!(inject_pct >= 0.0 && inject_pct <= 100.0)) {
    throw Error(ErrorKind::kConfig, "inject_pct must lie in [0, 100], got " + std::to_string(inject_pct));
  }
  if (delay_min_us < 1) throw Error(ErrorKind::kConfig, "delay_min_us must be >= 1");
  if (delay_min_us > delay_max_us) throw Error(ErrorKind::kConfig, "delay_min_us exceeds delay_max_us");
}

void RunConfig::validate() const {
  if (n_blocks == 0) throw Error(ErrorKind::kEmptyWorkload, "n_blocks must be >= 1");
  injection_plan().validate();
  if (workers < 1) throw Error(ErrorKind::kConfig, "workers must be >= 1");
  if (work_amplification < 1) throw Error(ErrorKind::kConfig, "work_amplification must be >= 1");
  if (!(base_time_us >= 0.0) || !std::isfinite(base_time_us)) {
    throw Error(ErrorKind::kConfig, "base_time_us must be finite and non-negative");
  }
  if (!(jitter_us >= 0.0) || !std::isfinite(jitter_us)) {
    throw Error(ErrorKind::kConfig, "jitter_us must be finite and non-negative");
  }
}

std::vector<PlainBlock> generate_blocks(std::size_t n, InputDistribution dist, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::kEmptyWorkload, "cannot generate zero blocks");
  std::vector<PlainBlock> blocks(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, StreamDomain::kPlaintext, i);
    blocks[i].index = i;
    for (auto& b : blocks[i].bytes) {
      b = dist == InputDistribution::kStructuredAscii
              ? static_cast<std::uint8_t>(rng.between(kAsciiLow, kAsciiHigh))
              : static_cast<std::uint8_t>(rng.below(256));
    }
  }
  return blocks;
}

std::vector<PlainBlock> assign_anomalies(std::span<const PlainBlock> blocks, const InjectionPlan& plan,
                                         std::uint64_t seed) {
  plan.validate();
  const double p = plan.inject_pct / 100.0;
  std::vector<PlainBlock> out(blocks.begin(), blocks.end());
  for (auto& block : out) {
    Rng rng(seed, StreamDomain::kSchedule, block.index);
    // Fixed draw order: membership, kind, duration. All three are consumed
    // regardless of outcome so the stream layout never shifts.
    const bool inject = rng.unit() < p;
    const bool pick_delay = rng.coin();
    const auto delay = static_cast<std::uint32_t>(rng.between(plan.delay_min_us, plan.delay_max_us));
    if (!inject) {
      block.tag = AnomalyTag::none();
      continue;
    }
    bool as_delay = pick_delay;
    if (plan.mix == AnomalyMix::kDelayOnly) as_delay = true;
    if (plan.mix == AnomalyMix::kFaultOnly) as_delay = false;
    block.tag = as_delay ? AnomalyTag::delay(delay) : AnomalyTag::fault();
  }
  return out;
}

Block apply_fault(const Block& block) noexcept {
  Block out = block;
  out[0] ^= 0xFF;
  return out;
}

PlainBlock apply_fault(const PlainBlock& block) noexcept {
  PlainBlock out = block;
  out.bytes = apply_fault(block.bytes);
  return out;
}

Block normalize_block(std::span<const std::uint8_t> raw) noexcept {
  Block out{};
  std::copy_n(raw.begin(), std::min(raw.size(), kBlockSize), out.begin());
  return out;
}

std::string_view to_string(InputDistribution d) noexcept {
  return d == InputDistribution::kStructuredAscii ? "ascii" : "uniform";
}

std::string_view to_string(AnomalyKind k) noexcept {
  switch (k) {
    case AnomalyKind::kNone: return "none";
    case AnomalyKind::kDelay: return "delay";
    case AnomalyKind::kFault: return "fault";
  }
  return "none";
}

std::string_view to_string(AnomalyMix m) noexcept {
  switch (m) {
    case AnomalyMix::kBoth: return "both";
    case AnomalyMix::kDelayOnly: return "delay";
    case AnomalyMix::kFaultOnly: return "fault";
  }
  return "both";
}

std::string_view to_string(TimingMode m) noexcept {
  return m == TimingMode::kReal ? "real" : "simulated";
}

std::optional<InputDistribution> parse_input_distribution(std::string_view s) noexcept {
  if (s == "uniform") return InputDistribution::kUniformRandom;
  if (s == "ascii") return InputDistribution::kStructuredAscii;
  return std::nullopt;
}

std::optional<AnomalyKind> parse_anomaly_kind(std::string_view s) noexcept {
  if (s == "none") return AnomalyKind::kNone;
  if (s == "delay") return AnomalyKind::kDelay;
  if (s == "fault") return AnomalyKind::kFault;
  return std::nullopt;
}

std::optional<AnomalyMix> parse_anomaly_mix(std::string_view s) noexcept {
  if (s == "both") return AnomalyMix::kBoth;
  if (s == "delay") return AnomalyMix::kDelayOnly;
  if (s == "fault") return AnomalyMix::kFaultOnly;
  return std::nullopt;
}

std::optional<TimingMode> parse_timing_mode(std::string_view s) noexcept {
  if (s == "real") return TimingMode::kReal;
  if (s == "simulated") return TimingMode::kSimulated;
  return std::nullopt;
}

}  // namespace aesguard
