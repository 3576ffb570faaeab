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

// Seeded random circuit generators shared by the property tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qal/circuit.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline const std::vector<qal::Opcode>& unitary_1q() {
  using qal::Opcode;
  static const std::vector<Opcode> ops{Opcode::kH,   Opcode::kX,   Opcode::kY,  Opcode::kZ,  Opcode::kS,  Opcode::kSdg,
                                       Opcode::kT,   Opcode::kTdg, Opcode::kRx, Opcode::kRy, Opcode::kRz};
  return ops;
}

inline const std::vector<qal::Opcode>& unitary_2q() {
  using qal::Opcode;
  static const std::vector<Opcode> ops{Opcode::kCnot, Opcode::kCz, Opcode::kSwap};
  return ops;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline unsigned below(Rng& rng, unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng); }

// Angles are drawn as doubles and stored as f32, so the stored value is the
// ground truth everywhere downstream.
inline float angle(Rng& rng) { return static_cast<float>(std::uniform_real_distribution<double>(-2 * M_PI, 2 * M_PI)(rng)); }

inline qal::Instruction unitary_gate(Rng& rng, unsigned num_qubits) {
  if (num_qubits >= 2 && below(rng, 3) == 0) {
    const unsigned a = below(rng, num_qubits);
    unsigned b = below(rng, num_qubits - 1);
    if (b >= a) ++b;
    return qal::Instruction::two_qubit(pick(rng, unitary_2q()), a, b);
  }
  const qal::Opcode op = pick(rng, unitary_1q());
  const unsigned q = below(rng, num_qubits);
  return qal::is_parameterized(op) ? qal::Instruction::rotation(op, q, angle(rng)) : qal::Instruction::gate(op, q);
}

inline qal::Circuit unitary_circuit(Rng& rng, unsigned num_qubits, unsigned num_gates) {
  qal::Circuit c(num_qubits, 0);
  for (unsigned i = 0; i < num_gates; ++i) c.add(unitary_gate(rng, num_qubits));
  return c;
}

// Any valid circuit: every opcode, including measurement, reset, barrier and
// nop, with random sizes.
inline qal::Circuit any_circuit(Rng& rng, unsigned max_gates = 40) {
  const unsigned nq = 1 + below(rng, qal::kMaxQubits);
  const unsigned ncb = below(rng, qal::kMaxCbits + 1);
  qal::Circuit c(nq, ncb);
  const unsigned n = below(rng, max_gates + 1);
  for (unsigned i = 0; i < n; ++i) {
    switch (below(rng, 6)) {
      case 0:
        if (ncb > 0) {
          c.add(qal::Instruction::measure(below(rng, nq), below(rng, ncb)));
          break;
        }
        [[fallthrough]];
      case 1: {
        static const std::vector<qal::Opcode> misc{qal::Opcode::kReset, qal::Opcode::kBarrier, qal::Opcode::kNop};
        const auto op = pick(rng, misc);
        c.add(op == qal::Opcode::kNop ? qal::Instruction{} : qal::Instruction::gate(op, below(rng, nq)));
        break;
      }
      default: c.add(unitary_gate(rng, nq));
    }
  }
  return c;
}

}  // namespace testgen
