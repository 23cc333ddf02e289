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

#include "aesguard/aes128.hpp"

#include <algorithm>
#include <ostream>

#include "aesguard/error.hpp"

namespace aesguard {
namespace {

constexpr std::uint8_t xtime(std::uint8_t x) {
  return static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1B : 0x00));
}

constexpr std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t p = 0;
  while (b) {
    if (b & 1) p ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return p;
}

constexpr std::uint8_t rotl8(std::uint8_t x, int s) {
  return static_cast<std::uint8_t>((x << s) | (x >> (8 - s)));
}

// S-box built from its definition: multiplicative inverse in GF(2^8) followed
// by the affine map b ^ rotl(b,1) ^ rotl(b,2) ^ rotl(b,3) ^ rotl(b,4) ^ 0x63.
constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> box{};
  for (int x = 0; x < 256; ++x) {
    std::uint8_t inv = 0;
    if (x != 0) {
      for (int y = 1; y < 256; ++y) {
        if (gf_mul(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)) == 1) {
          inv = static_cast<std::uint8_t>(y);
          break;
        }
      }
    }
    box[x] = static_cast<std::uint8_t>(inv ^ rotl8(inv, 1) ^ rotl8(inv, 2) ^ rotl8(inv, 3) ^
                                       rotl8(inv, 4) ^ 0x63);
  }
  return box;
}

constexpr auto kSbox = make_sbox();
static_assert(kSbox[0x00] == 0x63 && kSbox[0x53] == 0xED && kSbox[0xFF] == 0x16);

constexpr std::array<std::uint8_t, 10> kRcon = {0x01, 0x02, 0x04, 0x08, 0x10,
                                                0x20, 0x40, 0x80, 0x1B, 0x36};

using State = Block;  // column-major: state[r + 4c]

inline void add_round_key(State& s, const std::uint8_t* rk) {
  for (std::size_t i = 0; i < kBlockSize; ++i) s[i] ^= rk[i];
}

inline void sub_bytes(State& s) {
  for (auto& b : s) b = kSbox[b];
}

inline void shift_rows(State& s) {
  std::uint8_t t = s[1];
  s[1] = s[5]; s[5] = s[9]; s[9] = s[13]; s[13] = t;
  std::swap(s[2], s[10]);
  std::swap(s[6], s[14]);
  t = s[15];
  s[15] = s[11]; s[11] = s[7]; s[7] = s[3]; s[3] = t;
}

inline void mix_columns(State& s) {
  for (std::size_t c = 0; c < 4; ++c) {
    std::uint8_t* col = &s[4 * c];
    const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    const std::uint8_t all = a0 ^ a1 ^ a2 ^ a3;
    col[0] ^= all ^ xtime(a0 ^ a1);
    col[1] ^= all ^ xtime(a1 ^ a2);
    col[2] ^= all ^ xtime(a2 ^ a3);
    col[3] ^= all ^ xtime(a3 ^ a0);
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Block block_from_hex(std::string_view hex) {
  const auto bytes = from_hex(hex);
  if (bytes.size() != kBlockSize) throw Error(ErrorKind::kSize, "expected 16-byte hex block");
  Block b{};
  std::copy(bytes.begin(), bytes.end(), b.begin());
  return b;
}

}  // namespace

Key128 Key128::from_hex(std::string_view hex) {
  const auto bytes = aesguard::from_hex(hex);
  if (bytes.size() != 16) {
    throw Error(ErrorKind::kSize, "AES-128 key must be 16 bytes, got " + std::to_string(bytes.size()));
  }
  Key128 key;
  std::copy(bytes.begin(), bytes.end(), key.bytes.begin());
  return key;
}

Key128 default_key() noexcept {
  Key128 key;
  for (std::uint8_t i = 0; i < 16; ++i) key.bytes[i] = i;
  return key;
}

Aes128::Aes128(const Key128& key) noexcept {
  std::copy(key.bytes.begin(), key.bytes.end(), round_keys_.begin());
  for (std::size_t i = 16, round = 0; i < kRoundKeyBytes; i += 4) {
    std::uint8_t t[4] = {round_keys_[i - 4], round_keys_[i - 3], round_keys_[i - 2], round_keys_[i - 1]};
    if (i % 16 == 0) {
      // RotWord, SubWord, Rcon
      const std::uint8_t first = t[0];
      t[0] = static_cast<std::uint8_t>(kSbox[t[1]] ^ kRcon[round++]);
      t[1] = kSbox[t[2]];
      t[2] = kSbox[t[3]];
      t[3] = kSbox[first];
    }
    for (std::size_t k = 0; k < 4; ++k) round_keys_[i + k] = round_keys_[i + k - 16] ^ t[k];
  }
}

Aes128 Aes128::from_round_keys(const std::array<std::uint8_t, kRoundKeyBytes>& round_keys) noexcept {
  Aes128 cipher;
  cipher.round_keys_ = round_keys;
  return cipher;
}

Block Aes128::encrypt(const Block& plaintext) const noexcept {
  State s = plaintext;
  add_round_key(s, round_keys_.data());
  for (std::size_t round = 1; round < 10; ++round) {
    sub_bytes(s);
    shift_rows(s);
    mix_columns(s);
    add_round_key(s, round_keys_.data() + 16 * round);
  }
  sub_bytes(s);
  shift_rows(s);
  add_round_key(s, round_keys_.data() + 160);
  return s;
}

Block aes128_encrypt_block(std::span<const std::uint8_t> block, std::span<const std::uint8_t> key) {
  if (block.size() != kBlockSize) {
    throw Error(ErrorKind::kSize, "plaintext block must be 16 bytes, got " + std::to_string(block.size()));
  }
  if (key.size() != 16) {
    throw Error(ErrorKind::kSize, "AES-128 key must be 16 bytes, got " + std::to_string(key.size()));
  }
  Key128 k;
  std::copy(key.begin(), key.end(), k.bytes.begin());
  Block b{};
  std::copy(block.begin(), block.end(), b.begin());
  return Aes128(k).encrypt(b);
}

const std::vector<KnownAnswerVector>& known_answer_vectors() {
  static const std::vector<KnownAnswerVector> vectors = {
      {"FIPS-197 C.1", "000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff",
       "69c4e0d86a7b0430d8cdb78070b4c55a"},
      {"FIPS-197 B", "2b7e151628aed2a6abf7158809cf4f3c", "3243f6a8885a308d313198a2e0370734",
       "3925841d02dc09fbdc118597196a0b32"},
      {"SP800-38A F.1.1 #1", "2b7e151628aed2a6abf7158809cf4f3c", "6bc1bee22e409f96e93d7e117393172a",
       "3ad77bb40d7a3660a89ecaf32466ef97"},
      {"SP800-38A F.1.1 #2", "2b7e151628aed2a6abf7158809cf4f3c", "ae2d8a571e03ac9c9eb76fac45af8e51",
       "f5d3d58503b9699de785895a96fdbaaf"},
      {"SP800-38A F.1.1 #3", "2b7e151628aed2a6abf7158809cf4f3c", "30c81c46a35ce411e5fbc1191a0a52ef",
       "43b1cd7f598ece23881b00e3ed030688"},
      {"SP800-38A F.1.1 #4", "2b7e151628aed2a6abf7158809cf4f3c", "f69f2445df4f9b17ad2b417be66c3710",
       "7b0c785e27e8ad3f8223207104725dd4"},
  };
  return vectors;
}

KnownAnswerResult run_known_answer_suite(const BlockEncryptor& encrypt, std::ostream& log) {
  KnownAnswerResult result;
  for (const auto& v : known_answer_vectors()) {
    ++result.total;
    const Block got = encrypt(Key128::from_hex(v.key_hex), block_from_hex(v.plaintext_hex));
    const bool ok = got == block_from_hex(v.ciphertext_hex);
    log << (ok ? "PASS " : "FAIL ") << v.name << "  key=" << v.key_hex << " pt=" << v.plaintext_hex
        << " expected=" << v.ciphertext_hex;
    if (!ok) {
      log << " got=" << to_hex(got);
      result.failures.push_back(v.name);
    }
    log << '\n';
  }
  log << result.total - result.failures.size() << "/" << result.total << " known-answer vectors passed\n";
  return result;
}

KnownAnswerResult run_known_answer_suite(std::ostream& log) {
  return run_known_answer_suite([](const Key128& key, const Block& pt) { return Aes128(key).encrypt(pt); },
                                log);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorKind::kSize, "hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorKind::kSize, "invalid hex digit in '" + std::string(hex) + "'");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace aesguard
