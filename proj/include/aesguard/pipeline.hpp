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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aesguard/aes128.hpp"
#include "aesguard/workload.hpp"

namespace aesguard {

struct BlockRecord {
  std::size_t index = 0;
  Block plaintext_generated{};  // before fault injection
  Block plaintext_effective{};  // what was actually encrypted
  Block ciphertext{};
  double time_us = 0.0;
  AnomalyTag tag;

  bool truth_label() const { return tag.anomalous(); }

  friend bool operator==(const BlockRecord&, const BlockRecord&) = default;
};

// Encrypts one block, injecting its anomaly, and records the time spent.
//
// Real mode measures a monotonic span covering the injected sleep (if any) and
// all `work_amplification` encryptions. Simulated mode never sleeps; it reports
// base_time_us + U[0, jitter_us] + delay_us, with the jitter drawn from the
// stream keyed on (seed, block.index).
BlockRecord encrypt_timed(const PlainBlock& block, const Aes128& cipher, const RunConfig& cfg,
                          std::uint64_t seed);

// generate -> inject -> encrypt across cfg.workers threads. Records come back
// in index order. In simulated mode the result does not depend on cfg.workers.
// Throws Error(kPipeline) if the worker pool cannot be started.
std::vector<BlockRecord> run_pipeline(const RunConfig& cfg, const Key128& key);

// Encrypts an already prepared schedule; run_pipeline is a thin wrapper.
std::vector<BlockRecord> encrypt_schedule(const std::vector<PlainBlock>& schedule, const Aes128& cipher,
                                          const RunConfig& cfg);

}  // namespace aesguard
