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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "qal/circuit.hpp"
#include "qal/error.hpp"

namespace qal {
namespace {

struct OpcodeInfo {
  Opcode op;
  std::string_view name;
  bool two_qubit;
  bool parameterized;
  bool unitary;
};

constexpr std::array<OpcodeInfo, 18> kTable{{
    {Opcode::kNop, "nop", false, false, false},
    {Opcode::kH, "h", false, false, true},
    {Opcode::kX, "x", false, false, true},
    {Opcode::kY, "y", false, false, true},
    {Opcode::kZ, "z", false, false, true},
    {Opcode::kS, "s", false, false, true},
    {Opcode::kSdg, "sdg", false, false, true},
    {Opcode::kT, "t", false, false, true},
    {Opcode::kTdg, "tdg", false, false, true},
    {Opcode::kRx, "rx", false, true, true},
    {Opcode::kRy, "ry", false, true, true},
    {Opcode::kRz, "rz", false, true, true},
    {Opcode::kCnot, "cx", true, false, true},
    {Opcode::kCz, "cz", true, false, true},
    {Opcode::kSwap, "swap", true, false, true},
    {Opcode::kMeasure, "measure", false, false, false},
    {Opcode::kReset, "reset", false, false, false},
    {Opcode::kBarrier, "barrier", false, false, false},
}};

constexpr std::array<Opcode, kTable.size()> kAllOpcodes = [] {
  std::array<Opcode, kTable.size()> out{};
  for (std::size_t i = 0; i < kTable.size(); ++i) out[i] = kTable[i].op;
  return out;
}();

const OpcodeInfo* find(Opcode op) noexcept {
  for (const auto& info : kTable) {
    if (info.op == op) return &info;
  }
  return nullptr;
}

std::string where(std::size_t index) { return "instruction " + std::to_string(index) + ": "; }

}  // namespace

std::span<const Opcode> all_opcodes() noexcept { return kAllOpcodes; }

bool is_known_opcode(std::uint8_t raw) noexcept { return find(static_cast<Opcode>(raw)) != nullptr; }

bool is_two_qubit(Opcode op) noexcept {
  const auto* info = find(op);
  return info != nullptr && info->two_qubit;
}

bool is_parameterized(Opcode op) noexcept {
  const auto* info = find(op);
  return info != nullptr && info->parameterized;
}

bool is_unitary_gate(Opcode op) noexcept {
  const auto* info = find(op);
  return info != nullptr && info->unitary;
}

bool uses_q0(Opcode op) noexcept { return op != Opcode::kNop && find(op) != nullptr; }

std::string_view mnemonic(Opcode op) noexcept {
  const auto* info = find(op);
  return info != nullptr ? info->name : std::string_view{"?"};
}

std::optional<Opcode> opcode_from_mnemonic(std::string_view name) noexcept {
  for (const auto& info : kTable) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

bool operator==(const Instruction& a, const Instruction& b) noexcept {
  return a.opcode == b.opcode && a.q0 == b.q0 && a.q1 == b.q1 && a.cbit == b.cbit &&
         std::bit_cast<std::uint32_t>(a.param) == std::bit_cast<std::uint32_t>(b.param);
}

Instruction Instruction::gate(Opcode op, unsigned q) {
  return Instruction{op, static_cast<std::uint8_t>(q), 0, 0, 0.0f};
}

Instruction Instruction::rotation(Opcode op, unsigned q, float angle) {
  return Instruction{op, static_cast<std::uint8_t>(q), 0, 0, angle};
}

Instruction Instruction::two_qubit(Opcode op, unsigned a, unsigned b) {
  return Instruction{op, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), 0, 0.0f};
}

Instruction Instruction::measure(unsigned q, unsigned c) {
  return Instruction{Opcode::kMeasure, static_cast<std::uint8_t>(q), 0, static_cast<std::uint8_t>(c),
                     0.0f};
}

void validate(const Circuit& c) {
  if (c.num_qubits < 1 || c.num_qubits > kMaxQubits) {
    fail(ErrorCode::kInvalidCircuit, "num_qubits must be in 1..16, got " + std::to_string(c.num_qubits));
  }
  if (c.num_cbits > kMaxCbits) {
    fail(ErrorCode::kInvalidCircuit, "num_cbits must be in 0..16, got " + std::to_string(c.num_cbits));
  }
  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    const auto& ins = c.instructions[i];
    const auto* info = find(ins.opcode);
    if (info == nullptr) {
      fail(ErrorCode::kInvalidCircuit, where(i) + "unknown opcode");
    }
    if (uses_q0(ins.opcode)) {
      if (ins.q0 >= c.num_qubits) fail(ErrorCode::kInvalidCircuit, where(i) + "q0 out of range");
    } else if (ins.q0 != 0) {
      fail(ErrorCode::kInvalidCircuit, where(i) + "unused q0 must be zero");
    }
    if (info->two_qubit) {
      if (ins.q1 >= c.num_qubits) fail(ErrorCode::kInvalidCircuit, where(i) + "q1 out of range");
      if (ins.q1 == ins.q0) fail(ErrorCode::kInvalidCircuit, where(i) + "q0 and q1 must differ");
    } else if (ins.q1 != 0) {
      fail(ErrorCode::kInvalidCircuit, where(i) + "unused q1 must be zero");
    }
    if (ins.opcode == Opcode::kMeasure) {
      if (ins.cbit >= c.num_cbits) fail(ErrorCode::kInvalidCircuit, where(i) + "cbit out of range");
    } else if (ins.cbit != 0) {
      fail(ErrorCode::kInvalidCircuit, where(i) + "unused cbit must be zero");
    }
    if (info->parameterized) {
      if (!std::isfinite(ins.param)) fail(ErrorCode::kInvalidCircuit, where(i) + "angle is not finite");
    } else if (std::bit_cast<std::uint32_t>(ins.param) != 0) {
      fail(ErrorCode::kInvalidCircuit, where(i) + "unused param must be exactly 0.0");
    }
  }
}

bool is_valid(const Circuit& c) noexcept {
  try {
    validate(c);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace qal
