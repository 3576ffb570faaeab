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
#include <deque>
#include <limits>
#include <numbers>
#include <string>

#include "qal/error.hpp"
#include "qal/transpile.hpp"

namespace qal::transpile {

CouplingMap::CouplingMap(unsigned num_vertices, const std::vector<Edge>& edges)
    : num_vertices_(num_vertices), adjacency_(num_vertices) {
  for (auto [a, b] : edges) {
    if (a == b) fail(ErrorCode::kConfigInvalid, "coupling map has a self-loop on " + std::to_string(a));
    if (a >= num_vertices || b >= num_vertices) {
      fail(ErrorCode::kConfigInvalid, "coupling edge (" + std::to_string(a) + "," + std::to_string(b) +
                                          ") outside " + std::to_string(num_vertices) + " qubits");
    }
    const Edge key{std::min(a, b), std::max(a, b)};
    if (std::find(canonical_.begin(), canonical_.end(), key) != canonical_.end()) continue;
    canonical_.push_back(key);
    edges_.emplace_back(a, b);
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  std::sort(canonical_.begin(), canonical_.end());
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

CouplingMap CouplingMap::line(unsigned n) {
  std::vector<Edge> edges;
  for (unsigned i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return CouplingMap(n, edges);
}

CouplingMap CouplingMap::ring(unsigned n) {
  std::vector<Edge> edges;
  for (unsigned i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  if (n > 2) edges.emplace_back(n - 1, 0);
  return CouplingMap(n, edges);
}

CouplingMap CouplingMap::full(unsigned n) {
  std::vector<Edge> edges;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return CouplingMap(n, edges);
}

bool CouplingMap::adjacent(unsigned a, unsigned b) const noexcept {
  if (a >= num_vertices_ || b >= num_vertices_) return false;
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

bool CouplingMap::connected() const {
  if (num_vertices_ == 0) return false;
  std::vector<bool> seen(num_vertices_, false);
  std::deque<unsigned> frontier{0};
  seen[0] = true;
  unsigned visited = 1;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop_front();
    for (auto w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++visited;
        frontier.push_back(w);
      }
    }
  }
  return visited == num_vertices_;
}

std::vector<unsigned> CouplingMap::shortest_path(unsigned from, unsigned to) const {
  constexpr unsigned kUnreached = std::numeric_limits<unsigned>::max();
  std::vector<unsigned> dist(num_vertices_, kUnreached);
  std::deque<unsigned> frontier{to};
  dist[to] = 0;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop_front();
    for (auto w : adjacency_[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        frontier.push_back(w);
      }
    }
  }
  if (dist[from] == kUnreached) return {};
  // Walking from the source, the smallest neighbour one step closer to the
  // target yields the lexicographically smallest shortest path.
  std::vector<unsigned> path{from};
  unsigned v = from;
  while (v != to) {
    for (auto w : adjacency_[v]) {
      if (dist[w] + 1 == dist[v]) {
        v = w;
        break;
      }
    }
    path.push_back(v);
  }
  return path;
}

const OpcodeSet& default_native_gates() {
  static const OpcodeSet kNative{Opcode::kRx, Opcode::kRz, Opcode::kCnot};
  return kNative;
}

namespace {

bool passes_through(Opcode op) {
  return op == Opcode::kMeasure || op == Opcode::kReset || op == Opcode::kBarrier;
}

constexpr float kPi = static_cast<float>(std::numbers::pi);
constexpr float kHalfPi = static_cast<float>(std::numbers::pi / 2);
constexpr float kQuarterPi = static_cast<float>(std::numbers::pi / 4);

class Lowering {
 public:
  Lowering(const OpcodeSet& native, std::vector<Instruction>& out) : native_(native), out_(out) {}

  void lower(const Instruction& ins) {
    if (ins.opcode == Opcode::kNop) return;
    if (passes_through(ins.opcode) || native_.contains(ins.opcode)) {
      out_.push_back(ins);
      return;
    }
    const unsigned q = ins.q0;
    switch (ins.opcode) {
      case Opcode::kX: native_rot(Opcode::kRx, q, kPi); break;
      case Opcode::kZ: native_rot(Opcode::kRz, q, kPi); break;
      case Opcode::kS: native_rot(Opcode::kRz, q, kHalfPi); break;
      case Opcode::kSdg: native_rot(Opcode::kRz, q, -kHalfPi); break;
      case Opcode::kT: native_rot(Opcode::kRz, q, kQuarterPi); break;
      case Opcode::kTdg: native_rot(Opcode::kRz, q, -kQuarterPi); break;
      case Opcode::kY:
        native_rot(Opcode::kRx, q, kPi);
        native_rot(Opcode::kRz, q, kPi);
        break;
      case Opcode::kH:
        native_rot(Opcode::kRz, q, kHalfPi);
        native_rot(Opcode::kRx, q, kHalfPi);
        native_rot(Opcode::kRz, q, kHalfPi);
        break;
      case Opcode::kRy:
        native_rot(Opcode::kRz, q, -kHalfPi);
        native_rot(Opcode::kRx, q, ins.param);
        native_rot(Opcode::kRz, q, kHalfPi);
        break;
      case Opcode::kCz:
        lower(Instruction::gate(Opcode::kH, ins.q1));
        native_2q(ins.q0, ins.q1);
        lower(Instruction::gate(Opcode::kH, ins.q1));
        break;
      case Opcode::kSwap:
        native_2q(ins.q0, ins.q1);
        native_2q(ins.q1, ins.q0);
        native_2q(ins.q0, ins.q1);
        break;
      default:
        unsupported(ins.opcode);
    }
  }

 private:
  void native_rot(Opcode op, unsigned q, float angle) {
    if (!native_.contains(op)) unsupported(op);
    out_.push_back(Instruction::rotation(op, q, angle));
  }

  void native_2q(unsigned a, unsigned b) {
    if (!native_.contains(Opcode::kCnot)) unsupported(Opcode::kCnot);
    out_.push_back(Instruction::two_qubit(Opcode::kCnot, a, b));
  }

  [[noreturn]] static void unsupported(Opcode op) {
    fail(ErrorCode::kUnsupportedOpcode,
         "no decomposition reaches the native set for '" + std::string(mnemonic(op)) + "'");
  }

  const OpcodeSet& native_;
  std::vector<Instruction>& out_;
};

}  // namespace

Circuit decompose(const Circuit& c, const OpcodeSet& native) {
  validate(c);
  Circuit out(c.num_qubits, c.num_cbits);
  Lowering lowering(native, out.instructions);
  for (const auto& ins : c.instructions) lowering.lower(ins);
  return out;
}

TranspiledCircuit route(const Circuit& c, const CouplingMap& map) {
  validate(c);
  if (c.num_qubits > map.num_vertices()) {
    fail(ErrorCode::kQubitOutOfRange, "circuit needs " + std::to_string(c.num_qubits) + " qubits, coupling map has " +
                                          std::to_string(map.num_vertices()));
  }
  if (!map.connected()) fail(ErrorCode::kDisconnectedCoupling, "coupling map is not connected");

  const unsigned vertices = map.num_vertices();
  std::vector<unsigned> log_to_phys(vertices);
  std::vector<unsigned> phys_to_log(vertices);
  for (unsigned i = 0; i < vertices; ++i) log_to_phys[i] = phys_to_log[i] = i;

  std::vector<Instruction> body;
  unsigned highest = c.num_qubits - 1;
  auto touch = [&](unsigned p) { highest = std::max(highest, p); };
  auto emit_cnot = [&](unsigned a, unsigned b) {
    body.push_back(Instruction::two_qubit(Opcode::kCnot, a, b));
    touch(a);
    touch(b);
  };

  for (const auto& ins : c.instructions) {
    Instruction mapped = ins;
    if (uses_q0(ins.opcode)) mapped.q0 = static_cast<std::uint8_t>(log_to_phys[ins.q0]);
    if (is_two_qubit(ins.opcode)) {
      const unsigned target = log_to_phys[ins.q1];
      if (!map.adjacent(mapped.q0, target)) {
        const auto path = map.shortest_path(mapped.q0, target);
        for (std::size_t i = 0; i + 2 < path.size(); ++i) {
          const unsigned a = path[i];
          const unsigned b = path[i + 1];
          emit_cnot(a, b);
          emit_cnot(b, a);
          emit_cnot(a, b);
          std::swap(phys_to_log[a], phys_to_log[b]);
          log_to_phys[phys_to_log[a]] = a;
          log_to_phys[phys_to_log[b]] = b;
        }
      }
      mapped.q0 = static_cast<std::uint8_t>(log_to_phys[ins.q0]);
      mapped.q1 = static_cast<std::uint8_t>(log_to_phys[ins.q1]);
      touch(mapped.q1);
    }
    if (uses_q0(ins.opcode)) touch(mapped.q0);
    body.push_back(mapped);
  }

  TranspiledCircuit out;
  out.circuit = Circuit(highest + 1, c.num_cbits, std::move(body));
  out.layout_out.assign(log_to_phys.begin(), log_to_phys.begin() + highest + 1);
  return out;
}

}  // namespace qal::transpile
