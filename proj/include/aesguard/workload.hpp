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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace aesguard {

inline constexpr std::size_t kBlockSize = 16;
using Block = std::array<std::uint8_t, kBlockSize>;

enum class InputDistribution {
  kUniformRandom,    // bytes i.i.d. over 0x00..0xFF
  kStructuredAscii,  // bytes i.i.d. over 0x20..0x7E
};

inline constexpr std::uint8_t kAsciiLow = 0x20;
inline constexpr std::uint8_t kAsciiHigh = 0x7E;

enum class AnomalyKind { kNone, kDelay, kFault };

struct AnomalyTag {
  AnomalyKind kind = AnomalyKind::kNone;
  std::uint32_t delay_us = 0;  // meaningful only for kDelay

  static constexpr AnomalyTag none() { return {}; }
  static constexpr AnomalyTag delay(std::uint32_t us) { return {AnomalyKind::kDelay, us}; }
  static constexpr AnomalyTag fault() { return {AnomalyKind::kFault, 0}; }

  constexpr bool anomalous() const { return kind != AnomalyKind::kNone; }
  friend constexpr bool operator==(const AnomalyTag&, const AnomalyTag&) = default;
};

struct PlainBlock {
  std::size_t index = 0;
  Block bytes{};
  AnomalyTag tag;

  friend bool operator==(const PlainBlock&, const PlainBlock&) = default;
};

// Which anomaly kinds an injected block may receive. kBoth is a fair coin.
enum class AnomalyMix { kBoth, kDelayOnly, kFaultOnly };

struct InjectionPlan {
  double inject_pct = 20.0;
  std::uint32_t delay_min_us = 5000;
  std::uint32_t delay_max_us = 20000;
  AnomalyMix mix = AnomalyMix::kBoth;

  void validate() const;
};

enum class TimingMode { kReal, kSimulated };

struct RunConfig {
  std::size_t n_blocks = 4096;
  double inject_pct = 20.0;
  unsigned workers = 1;
  std::uint64_t seed = 42;
  TimingMode mode = TimingMode::kSimulated;
  std::uint32_t delay_min_us = 5000;
  std::uint32_t delay_max_us = 20000;
  AnomalyMix mix = AnomalyMix::kBoth;
  InputDistribution input_dist = InputDistribution::kUniformRandom;
  unsigned work_amplification = 1;
  // Simulated mode only.
  double base_time_us = 100.0;
  double jitter_us = 10.0;

  InjectionPlan injection_plan() const {
    return {inject_pct, delay_min_us, delay_max_us, mix};
  }

  // Throws Error(kConfig) describing the first violated constraint.
  void validate() const;
};

// Returns n blocks with tag none, deterministic in (n, dist, seed).
// Throws Error(kEmptyWorkload) when n == 0.
std::vector<PlainBlock> generate_blocks(std::size_t n, InputDistribution dist, std::uint64_t seed);

// Per-block Bernoulli(inject_pct / 100) injection. Each block draws from its
// own stream keyed on (seed, index), so the schedule for block i does not
// depend on how many blocks precede it.
std::vector<PlainBlock> assign_anomalies(std::span<const PlainBlock> blocks, const InjectionPlan& plan,
                                         std::uint64_t seed);

// Bit-flip fault: first byte XOR 0xFF. An involution.
Block apply_fault(const Block& block) noexcept;
PlainBlock apply_fault(const PlainBlock& block) noexcept;

// Truncates to the first 16 bytes or pads with 0x00.
Block normalize_block(std::span<const std::uint8_t> raw) noexcept;

std::string_view to_string(InputDistribution d) noexcept;
std::string_view to_string(AnomalyKind k) noexcept;
std::string_view to_string(AnomalyMix m) noexcept;
std::string_view to_string(TimingMode m) noexcept;

std::optional<InputDistribution> parse_input_distribution(std::string_view s) noexcept;
std::optional<AnomalyKind> parse_anomaly_kind(std::string_view s) noexcept;
std::optional<AnomalyMix> parse_anomaly_mix(std::string_view s) noexcept;
std::optional<TimingMode> parse_timing_mode(std::string_view s) noexcept;

}  // namespace aesguard
