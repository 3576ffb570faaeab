// Copyright 2026 The QAL Authors
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
#include <optional>
#include <stdexcept>
#include <string>

namespace qal {

// Values are shared with the C API (qal_status in qal.h) and must stay in sync.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kInvalidCircuit = 2,
  kBadMagic = 3,
  kUnsupportedVersion = 4,
  kTruncatedPayload = 5,
  kBadOpcode = 6,
  kQubitOutOfRange = 7,
  kMalformedPayload = 8,
  kSyntaxError = 9,
  kSemanticError = 10,
  kQubitCountOutOfRange = 11,
  kNonUnitaryOpcode = 12,
  kNonUnitaryCircuit = 13,
  kUnsupportedOpcode = 14,
  kDisconnectedCoupling = 15,
  kConfigInvalid = 16,
  kBadHeader = 17,
  kQueueSaturated = 18,
  kUnknownJob = 19,
  kTimedOut = 20,
  kNotFinished = 21,
  kJobFailed = 22,
  kTooLateToCancel = 23,
  kWrongMode = 24,
  kIo = 25,
  kBufferTooSmall = 26,
  kInternal = 27,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the C++ layer. Optional location data is filled
// by the codecs: byte offset for binary payloads, line/column for text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  std::optional<std::size_t> offset;
  std::optional<std::size_t> line;
  std::optional<std::size_t> column;
  // Device error-table code for failed jobs (JobFailed).
  std::optional<std::uint32_t> device_status;

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace qal
