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

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qal/error.hpp"
#include "qal/qsim.hpp"

namespace qal::qsim {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Statevector::Statevector(unsigned num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    fail(ErrorCode::kQubitCountOutOfRange, "statevector needs 1..16 qubits, got " + std::to_string(num_qubits));
  }
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

double Statevector::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return sum;
}

void Statevector::apply_1q(unsigned q, Amplitude m00, Amplitude m01, Amplitude m10, Amplitude m11) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | bit];
    amps_[i] = m00 * a0 + m01 * a1;
    amps_[i | bit] = m10 * a0 + m11 * a1;
  }
}

void Statevector::apply_phase(unsigned q, Amplitude phase) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) amps_[i] *= phase;
  }
}

void Statevector::apply(const Instruction& ins) {
  if (!is_unitary_gate(ins.opcode)) {
    fail(ErrorCode::kNonUnitaryOpcode, "opcode '" + std::string(mnemonic(ins.opcode)) + "' is not a unitary gate");
  }
  if (ins.q0 >= num_qubits_ || (is_two_qubit(ins.opcode) && (ins.q1 >= num_qubits_ || ins.q1 == ins.q0))) {
    fail(ErrorCode::kQubitOutOfRange, "gate operand outside the register");
  }
  const unsigned q = ins.q0;
  const double theta = static_cast<double>(ins.param);
  const Amplitude i1{0.0, 1.0};
  switch (ins.opcode) {
    case Opcode::kH:
      apply_1q(q, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
      break;
    case Opcode::kX:
      apply_1q(q, 0.0, 1.0, 1.0, 0.0);
      break;
    case Opcode::kY:
      apply_1q(q, 0.0, -i1, i1, 0.0);
      break;
    case Opcode::kZ:
      apply_phase(q, -1.0);
      break;
    case Opcode::kS:
      apply_phase(q, i1);
      break;
    case Opcode::kSdg:
      apply_phase(q, -i1);
      break;
    case Opcode::kT:
      apply_phase(q, std::polar(1.0, std::numbers::pi / 4));
      break;
    case Opcode::kTdg:
      apply_phase(q, std::polar(1.0, -std::numbers::pi / 4));
      break;
    case Opcode::kRx: {
      const double c = std::cos(theta / 2);
      const double s = std::sin(theta / 2);
      apply_1q(q, c, -i1 * s, -i1 * s, c);
      break;
    }
    case Opcode::kRy: {
      const double c = std::cos(theta / 2);
      const double s = std::sin(theta / 2);
      apply_1q(q, c, -s, s, c);
      break;
    }
    case Opcode::kRz:
      apply_1q(q, std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2));
      break;
    case Opcode::kCnot: {
      const std::size_t cbit = std::size_t{1} << ins.q0;
      const std::size_t tbit = std::size_t{1} << ins.q1;
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
      }
      break;
    }
    case Opcode::kCz: {
      const std::size_t mask = (std::size_t{1} << ins.q0) | (std::size_t{1} << ins.q1);
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == mask) amps_[i] = -amps_[i];
      }
      break;
    }
    case Opcode::kSwap: {
      const std::size_t abit = std::size_t{1} << ins.q0;
      const std::size_t bbit = std::size_t{1} << ins.q1;
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & abit) && !(i & bbit)) std::swap(amps_[i], amps_[(i & ~abit) | bbit]);
      }
      break;
    }
    default:
      fail(ErrorCode::kInternal, "unhandled unitary opcode");
  }
}

double Statevector::probability_one(unsigned qubit) const {
  const std::size_t bit = std::size_t{1} << qubit;
  double p = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) p += std::norm(amps_[i]);
  }
  return p;
}

void Statevector::collapse(unsigned qubit, bool outcome) {
  const std::size_t bit = std::size_t{1} << qubit;
  double kept = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (static_cast<bool>(i & bit) == outcome) {
      kept += std::norm(amps_[i]);
    } else {
      amps_[i] = 0.0;
    }
  }
  const double scale = 1.0 / std::sqrt(kept);
  for (auto& a : amps_) a *= scale;
}

Statevector new_state(unsigned num_qubits) { return Statevector(num_qubits); }

Statevector apply_gate(Statevector psi, const Instruction& ins) {
  psi.apply(ins);
  return psi;
}

Statevector statevector_of(const Circuit& c) {
  validate(c);
  Statevector psi(c.num_qubits);
  for (const auto& ins : c.instructions) {
    if (ins.opcode == Opcode::kMeasure || ins.opcode == Opcode::kReset) {
      fail(ErrorCode::kNonUnitaryCircuit, "circuit contains measure/reset");
    }
    if (is_unitary_gate(ins.opcode)) psi.apply(ins);
  }
  return psi;
}

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [key, n] : counts) sum += n;
  return sum;
}

std::uint64_t Histogram::count(std::uint64_t key) const noexcept {
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

Histogram run_circuit(const Circuit& c, std::uint64_t shots, std::uint64_t seed) {
  try {
    validate(c);
  } catch (const Error& e) {
    fail(ErrorCode::kInvalidCircuit, e.what());
  }
  if (shots < 1) fail(ErrorCode::kInvalidArgument, "shots must be at least 1");

  Statevector prefix(c.num_qubits);
  std::size_t first_nonunitary = 0;
  for (; first_nonunitary < c.instructions.size(); ++first_nonunitary) {
    const auto& ins = c.instructions[first_nonunitary];
    if (ins.opcode == Opcode::kMeasure || ins.opcode == Opcode::kReset) break;
    if (is_unitary_gate(ins.opcode)) prefix.apply(ins);
  }

  std::mt19937_64 rng(seed);
  Histogram hist;
  hist.num_cbits = c.num_cbits;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    Statevector psi = prefix;
    std::uint64_t bits = 0;
    for (std::size_t i = first_nonunitary; i < c.instructions.size(); ++i) {
      const auto& ins = c.instructions[i];
      if (ins.opcode == Opcode::kMeasure || ins.opcode == Opcode::kReset) {
        const bool one = uniform(rng) < psi.probability_one(ins.q0);
        psi.collapse(ins.q0, one);
        if (ins.opcode == Opcode::kMeasure) {
          const std::uint64_t mask = std::uint64_t{1} << ins.cbit;
          bits = one ? (bits | mask) : (bits & ~mask);
        } else if (one) {
          psi.apply(Instruction::gate(Opcode::kX, ins.q0));
        }
      } else if (is_unitary_gate(ins.opcode)) {
        psi.apply(ins);
      }
    }
    ++hist.counts[bits];
  }
  return hist;
}

}  // namespace qal::qsim
