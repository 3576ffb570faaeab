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

// Gate-level circuit representation shared by every layer of the stack,
// plus its two codecs: the fixed-width QAL binary format (.qalb) and the
// QALT text assembly (.qalt).

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qal {

enum class Opcode : std::uint8_t {
  kNop = 0x00,
  kH = 0x01,
  kX = 0x02,
  kY = 0x03,
  kZ = 0x04,
  kS = 0x05,
  kSdg = 0x06,
  kT = 0x07,
  kTdg = 0x08,
  kRx = 0x10,
  kRy = 0x11,
  kRz = 0x12,
  kCnot = 0x20,
  kCz = 0x21,
  kSwap = 0x22,
  kMeasure = 0x30,
  kReset = 0x31,
  kBarrier = 0x3F,
};

inline constexpr std::uint32_t kBinaryMagic = 0x51414C42;  // "QALB"
inline constexpr std::uint16_t kBinaryVersion = 1;
inline constexpr std::size_t kHeaderSize = 16;
inline constexpr std::size_t kInstructionSize = 8;
inline constexpr unsigned kMaxQubits = 16;
inline constexpr unsigned kMaxCbits = 16;

// Every opcode in table order.
std::span<const Opcode> all_opcodes() noexcept;

bool is_known_opcode(std::uint8_t raw) noexcept;
bool is_two_qubit(Opcode op) noexcept;
bool is_parameterized(Opcode op) noexcept;
// Unitary gates the simulator can apply. NOP and BARRIER are identities but
// not gates; MEASURE and RESET are not unitary.
bool is_unitary_gate(Opcode op) noexcept;
// Whether the q0 field carries a qubit operand (everything except NOP).
bool uses_q0(Opcode op) noexcept;
std::string_view mnemonic(Opcode op) noexcept;
std::optional<Opcode> opcode_from_mnemonic(std::string_view name) noexcept;

struct Instruction {
  Opcode opcode = Opcode::kNop;
  std::uint8_t q0 = 0;
  std::uint8_t q1 = 0;
  std::uint8_t cbit = 0;
  float param = 0.0f;

  // Bitwise comparison of param so that -0.0 and 0.0 stay distinct, which
  // the binary codec's canonical-form property relies on.
  friend bool operator==(const Instruction& a, const Instruction& b) noexcept;

  static Instruction gate(Opcode op, unsigned q);
  static Instruction rotation(Opcode op, unsigned q, float angle);
  static Instruction two_qubit(Opcode op, unsigned a, unsigned b);
  static Instruction measure(unsigned q, unsigned c);
};

struct Circuit {
  unsigned num_qubits = 1;
  unsigned num_cbits = 0;
  std::vector<Instruction> instructions;

  Circuit() = default;
  Circuit(unsigned qubits, unsigned cbits, std::vector<Instruction> body = {})
      : num_qubits(qubits), num_cbits(cbits), instructions(std::move(body)) {}

  Circuit& add(const Instruction& ins) {
    instructions.push_back(ins);
    return *this;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Throws Error(kInvalidCircuit) describing the first violated invariant.
void validate(const Circuit& c);
bool is_valid(const Circuit& c) noexcept;

std::vector<std::uint8_t> encode_binary(const Circuit& c);
// Throws Error with kBadMagic, kUnsupportedVersion, kTruncatedPayload,
// kBadOpcode, kQubitOutOfRange or kMalformedPayload; Error::offset is set
// to the byte offset of the offending field.
Circuit decode_binary(std::span<const std::uint8_t> bytes);

// Throws Error(kSyntaxError | kSemanticError) with line and column set.
Circuit parse_text(std::string_view text);
std::string emit_text(const Circuit& c);

// Shortest decimal that reads back as the same float.
std::string format_angle(float value);

}  // namespace qal
