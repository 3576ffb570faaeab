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

// Statevector fidelity engine. Amplitude index bit k is qubit k.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "qal/circuit.hpp"

namespace qal::qsim {

using Amplitude = std::complex<double>;

class Statevector {
 public:
  // |0...0> on n qubits; throws kQubitCountOutOfRange outside 1..16.
  explicit Statevector(unsigned num_qubits);

  unsigned num_qubits() const noexcept { return num_qubits_; }
  std::size_t size() const noexcept { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }
  double norm_squared() const noexcept;

  // Throws kNonUnitaryOpcode for MEASURE/RESET/BARRIER/NOP and
  // kQubitOutOfRange for operands beyond num_qubits.
  void apply(const Instruction& ins);

  // Probability that qubit reads 1.
  double probability_one(unsigned qubit) const;
  // Projects onto the given outcome and renormalises.
  void collapse(unsigned qubit, bool outcome);

 private:
  void apply_1q(unsigned q, Amplitude m00, Amplitude m01, Amplitude m10, Amplitude m11);
  void apply_phase(unsigned q, Amplitude phase);

  unsigned num_qubits_;
  std::vector<Amplitude> amps_;
};

Statevector new_state(unsigned num_qubits);
Statevector apply_gate(Statevector psi, const Instruction& ins);

// The final state of a unitary circuit; NOP and BARRIER are identities.
// Throws kNonUnitaryCircuit if the circuit measures or resets.
Statevector statevector_of(const Circuit& c);

struct Histogram {
  unsigned num_cbits = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t total() const noexcept;
  std::uint64_t count(std::uint64_t key) const noexcept;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

// Per-shot execution: the leading unitary block is evaluated once, then each
// shot copies that state and runs the remainder, sampling measurements from
// one mt19937_64 stream seeded with `seed`.
Histogram run_circuit(const Circuit& c, std::uint64_t shots, std::uint64_t seed);

}  // namespace qal::qsim
