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

#include <bit>
#include <cmath>
#include <string>

#include "common/byte_io.hpp"
#include "qal/circuit.hpp"
#include "qal/error.hpp"

namespace qal {
namespace {

using detail::get_f32;
using detail::get_le;

[[noreturn]] void decode_fail(ErrorCode code, std::size_t offset, const std::string& what) {
  Error err(code, what + " at byte offset " + std::to_string(offset));
  err.offset = offset;
  throw err;
}

}  // namespace

std::vector<std::uint8_t> encode_binary(const Circuit& c) {
  validate(c);
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + kInstructionSize * c.instructions.size());
  detail::put_le<std::uint32_t>(out, kBinaryMagic);
  detail::put_le<std::uint16_t>(out, kBinaryVersion);
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(c.num_qubits));
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(c.num_cbits));
  detail::put_le<std::uint16_t>(out, 0);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(c.instructions.size()));
  for (const auto& ins : c.instructions) {
    out.push_back(static_cast<std::uint8_t>(ins.opcode));
    out.push_back(ins.q0);
    out.push_back(ins.q1);
    out.push_back(ins.cbit);
    detail::put_f32(out, ins.param);
  }
  return out;
}

Circuit decode_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    decode_fail(ErrorCode::kTruncatedPayload, bytes.size(), "header needs 16 bytes");
  }
  if (get_le<std::uint32_t>(bytes, 0) != kBinaryMagic) {
    decode_fail(ErrorCode::kBadMagic, 0, "bad magic");
  }
  if (get_le<std::uint16_t>(bytes, 4) != kBinaryVersion) {
    decode_fail(ErrorCode::kUnsupportedVersion, 4, "unsupported version");
  }
  const unsigned nq = get_le<std::uint16_t>(bytes, 6);
  const unsigned ncb = get_le<std::uint16_t>(bytes, 8);
  if (nq < 1 || nq > kMaxQubits) decode_fail(ErrorCode::kQubitOutOfRange, 6, "num_qubits outside 1..16");
  if (ncb > kMaxCbits) decode_fail(ErrorCode::kMalformedPayload, 8, "num_cbits above 16");
  if (get_le<std::uint16_t>(bytes, 10) != 0) decode_fail(ErrorCode::kMalformedPayload, 10, "reserved field nonzero");

  const std::uint64_t count = get_le<std::uint32_t>(bytes, 12);
  const std::uint64_t expected = kHeaderSize + kInstructionSize * count;
  if (bytes.size() < expected) {
    decode_fail(ErrorCode::kTruncatedPayload, bytes.size(),
                "header declares " + std::to_string(count) + " instructions, body is short");
  }
  if (bytes.size() > expected) {
    decode_fail(ErrorCode::kMalformedPayload, expected, "trailing bytes after last instruction");
  }

  Circuit c(nq, ncb);
  c.instructions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = kHeaderSize + kInstructionSize * i;
    const std::uint8_t raw = bytes[at];
    if (!is_known_opcode(raw)) decode_fail(ErrorCode::kBadOpcode, at, "unknown opcode");
    Instruction ins{static_cast<Opcode>(raw), bytes[at + 1], bytes[at + 2], bytes[at + 3], get_f32(bytes, at + 4)};

    if (uses_q0(ins.opcode)) {
      if (ins.q0 >= nq) decode_fail(ErrorCode::kQubitOutOfRange, at + 1, "q0 out of range");
    } else if (ins.q0 != 0) {
      decode_fail(ErrorCode::kMalformedPayload, at + 1, "unused q0 nonzero");
    }
    if (is_two_qubit(ins.opcode)) {
      if (ins.q1 >= nq) decode_fail(ErrorCode::kQubitOutOfRange, at + 2, "q1 out of range");
      if (ins.q1 == ins.q0) decode_fail(ErrorCode::kQubitOutOfRange, at + 2, "q1 equals q0");
    } else if (ins.q1 != 0) {
      decode_fail(ErrorCode::kMalformedPayload, at + 2, "unused q1 nonzero");
    }
    if (ins.opcode == Opcode::kMeasure) {
      if (ins.cbit >= ncb) decode_fail(ErrorCode::kQubitOutOfRange, at + 3, "cbit out of range");
    } else if (ins.cbit != 0) {
      decode_fail(ErrorCode::kMalformedPayload, at + 3, "unused cbit nonzero");
    }
    if (is_parameterized(ins.opcode)) {
      if (!std::isfinite(ins.param)) decode_fail(ErrorCode::kMalformedPayload, at + 4, "angle not finite");
    } else if (std::bit_cast<std::uint32_t>(ins.param) != 0) {
      decode_fail(ErrorCode::kMalformedPayload, at + 4, "unused param nonzero");
    }
    c.instructions.push_back(ins);
  }
  return c;
}

}  // namespace qal
