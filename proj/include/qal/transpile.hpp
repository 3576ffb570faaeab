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

// On-device lowering: native-gate decomposition, greedy SWAP routing over a
// coupling map, and an LRU cache keyed on circuit content and target.

#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qal/circuit.hpp"

namespace qal::transpile {

using Edge = std::pair<unsigned, unsigned>;

// Undirected graph over physical qubits 0..num_vertices-1. edges() keeps the
// declaration order (duplicates dropped); canonical_edges() is the sorted
// (lo, hi) form used for equality and cache keys.
class CouplingMap {
 public:
  CouplingMap() = default;
  // Throws kConfigInvalid on self-loops or out-of-range vertices.
  CouplingMap(unsigned num_vertices, const std::vector<Edge>& edges);

  static CouplingMap line(unsigned n);
  static CouplingMap ring(unsigned n);
  static CouplingMap full(unsigned n);

  unsigned num_vertices() const noexcept { return num_vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Edge>& canonical_edges() const noexcept { return canonical_; }
  bool adjacent(unsigned a, unsigned b) const noexcept;
  const std::vector<unsigned>& neighbours(unsigned v) const { return adjacency_[v]; }
  bool connected() const;

  // Lexicographically smallest shortest path by vertex sequence, endpoints
  // included. Empty if unreachable.
  std::vector<unsigned> shortest_path(unsigned from, unsigned to) const;

  friend bool operator==(const CouplingMap& a, const CouplingMap& b) {
    return a.num_vertices_ == b.num_vertices_ && a.canonical_ == b.canonical_;
  }

 private:
  unsigned num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<Edge> canonical_;
  std::vector<std::vector<unsigned>> adjacency_;
};

using OpcodeSet = std::set<Opcode>;

// {RX, RZ, CNOT}.
const OpcodeSet& default_native_gates();

struct Target {
  unsigned num_qubits = kMaxQubits;
  OpcodeSet native_gates = default_native_gates();
  CouplingMap coupling = CouplingMap::line(kMaxQubits);
};

struct TranspiledCircuit {
  Circuit circuit;
  // layout_out[logical] = physical qubit holding that logical qubit at the end.
  std::vector<unsigned> layout_out;

  friend bool operator==(const TranspiledCircuit&, const TranspiledCircuit&) = default;
};

// Rewrites every gate outside `native` using the fixed rule table. NOPs are
// dropped. Throws kUnsupportedOpcode when a rule would need a gate that is
// not native either.
Circuit decompose(const Circuit& c, const OpcodeSet& native = default_native_gates());

// Greedy routing from the identity layout; the control walks toward the
// target along the shortest path. Throws kDisconnectedCoupling.
TranspiledCircuit route(const Circuit& c, const CouplingMap& map);

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
};

class TranspileCache {
 public:
  explicit TranspileCache(std::size_t capacity = 1024);

  std::optional<TranspiledCircuit> lookup(const std::string& key);
  void insert(const std::string& key, TranspiledCircuit value);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const;
  CacheStats stats() const;

 private:
  using Entry = std::pair<std::string, TranspiledCircuit>;

  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> lru_;  // front = most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
  CacheStats stats_;
};

// Content key: encoded circuit bytes, canonical edge list and native set.
std::string cache_key(const Circuit& c, const Target& target);

TranspiledCircuit transpile(const Circuit& c, const Target& target, TranspileCache& cache);

}  // namespace qal::transpile
