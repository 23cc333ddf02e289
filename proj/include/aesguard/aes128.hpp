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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aesguard/workload.hpp"

namespace aesguard {

struct Key128 {
  std::array<std::uint8_t, 16> bytes{};

  // Throws Error(kSize) unless hex encodes exactly 16 bytes.
  static Key128 from_hex(std::string_view hex);

  friend bool operator==(const Key128&, const Key128&) = default;
};

// FIPS-197 Appendix C.1 key, 000102...0e0f.
Key128 default_key() noexcept;

inline constexpr std::size_t kRoundKeyBytes = 176;  // 11 round keys x 16 bytes

// Byte-oriented AES-128 encryption (FIPS-197). The key schedule is expanded
// once at construction; encrypt() is const and safe to call concurrently.
class Aes128 {
 public:
  explicit Aes128(const Key128& key) noexcept;

  static Aes128 from_round_keys(const std::array<std::uint8_t, kRoundKeyBytes>& round_keys) noexcept;

  Block encrypt(const Block& plaintext) const noexcept;

  const std::array<std::uint8_t, kRoundKeyBytes>& round_keys() const noexcept { return round_keys_; }

 private:
  Aes128() = default;
  std::array<std::uint8_t, kRoundKeyBytes> round_keys_{};
};

// Single-block ECB encryption over untyped buffers. Throws Error(kSize) if
// either span is not 16 bytes.
Block aes128_encrypt_block(std::span<const std::uint8_t> block, std::span<const std::uint8_t> key);

struct KnownAnswerVector {
  std::string name;
  std::string key_hex;
  std::string plaintext_hex;
  std::string ciphertext_hex;
};

// FIPS-197 Appendix B and C.1 plus the four SP 800-38A ECB-AES128 blocks.
const std::vector<KnownAnswerVector>& known_answer_vectors();

using BlockEncryptor = std::function<Block(const Key128&, const Block&)>;

struct KnownAnswerResult {
  std::size_t total = 0;
  std::vector<std::string> failures;  // names of mismatching vectors

  bool passed() const { return total > 0 && failures.empty(); }
};

// Runs every known-answer vector through `encrypt`, writing one line per
// vector to `log`.
KnownAnswerResult run_known_answer_suite(const BlockEncryptor& encrypt, std::ostream& log);
KnownAnswerResult run_known_answer_suite(std::ostream& log);

// Lowercase hex helpers shared by the CLI and CSV export.
std::string to_hex(std::span<const std::uint8_t> bytes);
// Throws Error(kSize) on odd length or a non-hex digit.
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace aesguard
