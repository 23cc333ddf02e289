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

#include "aesguard/error.hpp"

namespace aesguard {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kEmptyWorkload: return "empty workload";
    case ErrorKind::kEmptySample: return "empty sample";
    case ErrorKind::kSize: return "size error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kStratification: return "stratification error";
    case ErrorKind::kDegenerateTraining: return "degenerate training set";
    case ErrorKind::kPipeline: return "pipeline error";
    case ErrorKind::kComparison: return "comparison error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kModelFormat: return "model format error";
    case ErrorKind::kConfig: return "configuration error";
  }
  return "error";
}

}  // namespace aesguard
