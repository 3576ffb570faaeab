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

#include "qal/error.hpp"

namespace qal {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInvalidCircuit: return "invalid circuit";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported version";
    case ErrorCode::kTruncatedPayload: return "truncated payload";
    case ErrorCode::kBadOpcode: return "bad opcode";
    case ErrorCode::kQubitOutOfRange: return "qubit out of range";
    case ErrorCode::kMalformedPayload: return "malformed payload";
    case ErrorCode::kSyntaxError: return "syntax error";
    case ErrorCode::kSemanticError: return "semantic error";
    case ErrorCode::kQubitCountOutOfRange: return "qubit count out of range";
    case ErrorCode::kNonUnitaryOpcode: return "non-unitary opcode";
    case ErrorCode::kNonUnitaryCircuit: return "non-unitary circuit";
    case ErrorCode::kUnsupportedOpcode: return "unsupported opcode";
    case ErrorCode::kDisconnectedCoupling: return "disconnected coupling map";
    case ErrorCode::kConfigInvalid: return "invalid configuration";
    case ErrorCode::kBadHeader: return "bad header";
    case ErrorCode::kQueueSaturated: return "queue saturated";
    case ErrorCode::kUnknownJob: return "unknown job";
    case ErrorCode::kTimedOut: return "timed out";
    case ErrorCode::kNotFinished: return "job not finished";
    case ErrorCode::kJobFailed: return "job failed";
    case ErrorCode::kTooLateToCancel: return "too late to cancel";
    case ErrorCode::kWrongMode: return "wrong device mode";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kBufferTooSmall: return "buffer too small";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qal
