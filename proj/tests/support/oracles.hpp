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

// Independent reference implementations used only by tests. Nothing here
// calls into the code paths it is used to check.

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "aesguard/forest.hpp"
#include "aesguard/workload.hpp"

namespace aesguard::testing {

// AES-128-ECB through OpenSSL's EVP interface, no padding.
inline Block openssl_aes128(const std::array<std::uint8_t, 16>& key, const Block& in, bool encrypt) {
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  Block out{};
  int len = 0;
  const bool ok = EVP_CipherInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr, encrypt ? 1 : 0) == 1 &&
                  EVP_CIPHER_CTX_set_padding(ctx, 0) == 1 &&
                  EVP_CipherUpdate(ctx, out.data(), &len, in.data(), static_cast<int>(in.size())) == 1 && len == 16;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok) throw std::runtime_error("OpenSSL AES-128-ECB failed");
  return out;
}

inline Block reference_encrypt(const std::array<std::uint8_t, 16>& key, const Block& pt) {
  return openssl_aes128(key, pt, true);
}
inline Block reference_decrypt(const std::array<std::uint8_t, 16>& key, const Block& ct) {
  return openssl_aes128(key, ct, false);
}

// Threshold rule evaluated naively: plain summation for the mean.
inline double naive_threshold(const std::vector<double>& t) {
  double sum = 0.0;
  for (double x : t) sum += x;
  const double mean = sum / static_cast<double>(t.size());
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  return mean + 3.0 * (*hi - *lo) / static_cast<double>(t.size());
}

inline double naive_gini(double benign, double malicious) {
  const double n = benign + malicious;
  if (n == 0.0) return 0.0;
  return 1.0 - (benign / n) * (benign / n) - (malicious / n) * (malicious / n);
}

struct BruteSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
  std::multiset<std::size_t> left;  // rows sent left
};

// Exhaustive enumeration: every candidate feature, every midpoint between
// consecutive distinct values, gain from directly counted partitions. Ties
// (within 1e-12) keep the earliest feature, then the smallest threshold.
inline std::optional<BruteSplit> brute_force_split(const Dataset& data, std::span<const std::size_t> rows,
                                                   std::vector<std::size_t> features) {
  std::sort(features.begin(), features.end());
  double parent_b = 0, parent_m = 0;
  for (auto r : rows) (data.label(r) ? parent_m : parent_b) += 1;
  const double n = parent_b + parent_m;
  const double parent = naive_gini(parent_b, parent_m);

  std::optional<BruteSplit> best;
  for (auto f : features) {
    std::set<double> distinct;
    for (auto r : rows) distinct.insert(data.at(r, f));
    std::vector<double> values(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double thr = std::midpoint(values[i], values[i + 1]);
      double lb = 0, lm = 0, rb = 0, rm = 0;
      BruteSplit cand;
      cand.feature = f;
      cand.threshold = thr;
      for (auto r : rows) {
        const bool left = data.at(r, f) <= thr;
        if (left) cand.left.insert(r);
        double& slot = left ? (data.label(r) ? lm : lb) : (data.label(r) ? rm : rb);
        slot += 1;
      }
      cand.gain = parent - ((lb + lm) / n) * naive_gini(lb, lm) - ((rb + rm) / n) * naive_gini(rb, rm);
      if (cand.gain <= 1e-12) continue;
      if (!best || cand.gain > best->gain + 1e-12) best = std::move(cand);
    }
  }
  return best;
}

}  // namespace aesguard::testing
