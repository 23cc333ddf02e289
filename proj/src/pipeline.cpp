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

#include "aesguard/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <string>
#include <mutex>
#include <system_error>
#include <thread>

#include "aesguard/error.hpp"
#include "aesguard/rng.hpp"

namespace aesguard {
namespace {

// Blocks handed to a worker per grab from the shared cursor.
constexpr std::size_t kChunk = 16;

// Keeps repeated encryptions of the same block from being folded away.
void escape(const Block& b) {
  asm volatile("" : : "r"(b.data()) : "memory");
}

}  // namespace

BlockRecord encrypt_timed(const PlainBlock& block, const Aes128& cipher, const RunConfig& cfg,
                          std::uint64_t seed) {
  BlockRecord rec;
  rec.index = block.index;
  rec.tag = block.tag;
  rec.plaintext_generated = block.bytes;
  rec.plaintext_effective = block.tag.kind == AnomalyKind::kFault ? apply_fault(block.bytes) : block.bytes;

  const unsigned reps = cfg.work_amplification < 1 ? 1 : cfg.work_amplification;

  if (cfg.mode == TimingMode::kSimulated) {
    for (unsigned r = 0; r < reps; ++r) rec.ciphertext = cipher.encrypt(rec.plaintext_effective);
    Rng rng(seed, StreamDomain::kJitter, block.index);
    const double jitter = rng.unit() * cfg.jitter_us;
    const double delay = block.tag.kind == AnomalyKind::kDelay ? block.tag.delay_us : 0.0;
    rec.time_us = cfg.base_time_us + jitter + delay;
    return rec;
  }

  using Clock = std::chrono::steady_clock;
  static_assert(Clock::is_steady);
  const auto start = Clock::now();
  if (block.tag.kind == AnomalyKind::kDelay) {
    std::this_thread::sleep_for(std::chrono::microseconds(block.tag.delay_us));
  }
  for (unsigned r = 0; r < reps; ++r) {
    rec.ciphertext = cipher.encrypt(rec.plaintext_effective);
    escape(rec.ciphertext);
  }
  const auto stop = Clock::now();
  rec.time_us = std::chrono::duration<double, std::micro>(stop - start).count();
  return rec;
}

std::vector<BlockRecord> encrypt_schedule(const std::vector<PlainBlock>& schedule, const Aes128& cipher,
                                          const RunConfig& cfg) {
  std::vector<BlockRecord> records(schedule.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    try {
      for (;;) {
        const std::size_t begin = cursor.fetch_add(kChunk, std::memory_order_relaxed);
        if (begin >= schedule.size()) return;
        const std::size_t end = std::min(begin + kChunk, schedule.size());
        for (std::size_t i = begin; i < end; ++i) {
          if (schedule[i].index >= records.size()) {
            throw Error(ErrorKind::kPipeline, "block index out of range: " + std::to_string(schedule[i].index));
          }
          // Slot by block index, not completion order.
          records[schedule[i].index] = encrypt_timed(schedule[i], cipher, cfg, cfg.seed);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };

  const unsigned workers = cfg.workers < 1 ? 1 : cfg.workers;
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    try {
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    } catch (const std::system_error& e) {
      cursor.store(schedule.size());  // drain the workers that did start
      pool.clear();
      throw Error(ErrorKind::kPipeline, std::string("failed to start worker pool: ") + e.what());
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<BlockRecord> run_pipeline(const RunConfig& cfg, const Key128& key) {
  cfg.validate();
  auto blocks = generate_blocks(cfg.n_blocks, cfg.input_dist, cfg.seed);
  auto schedule = assign_anomalies(blocks, cfg.injection_plan(), cfg.seed);
  const Aes128 cipher(key);
  return encrypt_schedule(schedule, cipher, cfg);
}

}  // namespace aesguard
