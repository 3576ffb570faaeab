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

#include <limits>
#include <sstream>

#include "json.hpp"
#include "qal/error.hpp"
#include "qal/qal_core.hpp"

namespace qal::core {

const char* to_string(JobState s) noexcept {
  switch (s) {
    case JobState::kCreated: return "CREATED";
    case JobState::kQueued: return "QUEUED";
    case JobState::kDispatched: return "DISPATCHED";
    case JobState::kRunning: return "RUNNING";
    case JobState::kDone: return "DONE";
    case JobState::kFailed: return "FAILED";
    case JobState::kCancelled: return "CANCELLED";
  }
  return "UNKNOWN";
}

bool is_terminal(JobState s) noexcept {
  return s == JobState::kDone || s == JobState::kFailed || s == JobState::kCancelled;
}

bool transition_allowed(JobState from, JobState to) noexcept {
  switch (from) {
    case JobState::kCreated: return to == JobState::kQueued;
    case JobState::kQueued: return to == JobState::kDispatched || to == JobState::kCancelled;
    case JobState::kDispatched: return to == JobState::kRunning;
    case JobState::kRunning: return to == JobState::kDone || to == JobState::kFailed;
    default: return false;
  }
}

const char* to_string(ExecMode m) noexcept { return m == ExecMode::kLatency ? "latency" : "fidelity"; }

void StrictPriorityFifo::push(const QueueEntry& entry) {
  const Key key{entry.priority, entry.seq, entry.job};
  order_.insert(key);
  index_[entry.job] = key;
}

std::optional<QueueEntry> StrictPriorityFifo::pop() {
  if (order_.empty()) return std::nullopt;
  const auto [priority, seq, job] = *order_.begin();
  order_.erase(order_.begin());
  index_.erase(job);
  return QueueEntry{job, priority, seq};
}

bool StrictPriorityFifo::remove(JobId job) {
  const auto it = index_.find(job);
  if (it == index_.end()) return false;
  order_.erase(it->second);
  index_.erase(it);
  return true;
}

transpile::CouplingMap DeviceConfig::coupling() const {
  if (coupling_preset == "line") return transpile::CouplingMap::line(num_qubits);
  if (coupling_preset == "ring") return transpile::CouplingMap::ring(num_qubits);
  if (coupling_preset == "full") return transpile::CouplingMap::full(num_qubits);
  if (coupling_preset == "edges") return transpile::CouplingMap(num_qubits, coupling_edges);
  fail(ErrorCode::kConfigInvalid, "unknown coupling preset '" + coupling_preset + "'");
}

void DeviceConfig::validate() const {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    fail(ErrorCode::kConfigInvalid, "num_qubits must be in 1..16, got " + std::to_string(num_qubits));
  }
  if (!coupling().connected()) fail(ErrorCode::kConfigInvalid, "coupling map must be connected");
  if (sq_depth < 2 || sq_depth > 65536) fail(ErrorCode::kConfigInvalid, "sq_depth must be in 2..65536");
  if (cq_depth < 2 || cq_depth > 65536) fail(ErrorCode::kConfigInvalid, "cq_depth must be in 2..65536");
  if (host_memory_bytes < (64u << 10)) fail(ErrorCode::kConfigInvalid, "host_memory_bytes must be at least 64 KiB");
  if (cache_capacity < 1) fail(ErrorCode::kConfigInvalid, "cache_capacity must be positive");
  if (queue_high_water < 1) fail(ErrorCode::kConfigInvalid, "queue_high_water must be positive");
}

namespace {

template <typename T>
T unsigned_field(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_unsigned()) fail(ErrorCode::kConfigInvalid, "'" + key + "' must be a non-negative integer");
  const auto raw = value.get<std::uint64_t>();
  if (raw > std::numeric_limits<T>::max()) fail(ErrorCode::kConfigInvalid, "'" + key + "' is too large");
  return static_cast<T>(raw);
}

}  // namespace

DeviceConfig DeviceConfig::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kConfigInvalid, std::string("device config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kConfigInvalid, "device config must be a JSON object");
  DeviceConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "num_qubits") {
      cfg.num_qubits = unsigned_field<unsigned>(value, key);
    } else if (key == "coupling") {
      if (value.is_string()) {
        cfg.coupling_preset = value.get<std::string>();
      } else if (value.is_array()) {
        cfg.coupling_preset = "edges";
        cfg.coupling_edges.clear();
        for (const auto& edge : value) {
          if (!edge.is_array() || edge.size() != 2) fail(ErrorCode::kConfigInvalid, "coupling edges are [a, b] pairs");
          cfg.coupling_edges.emplace_back(unsigned_field<unsigned>(edge[0], key), unsigned_field<unsigned>(edge[1], key));
        }
      } else {
        fail(ErrorCode::kConfigInvalid, "'coupling' must be a preset name or an edge list");
      }
    } else if (key == "mode") {
      const auto mode = value.is_string() ? value.get<std::string>() : std::string{};
      if (mode == "fidelity") {
        cfg.mode = ExecMode::kFidelity;
      } else if (mode == "latency") {
        cfg.mode = ExecMode::kLatency;
      } else {
        fail(ErrorCode::kConfigInvalid, "'mode' must be \"fidelity\" or \"latency\"");
      }
    } else if (key == "bypass_transpile") {
      if (!value.is_boolean()) fail(ErrorCode::kConfigInvalid, "'bypass_transpile' must be a boolean");
      cfg.bypass_transpile = value.get<bool>();
    } else if (key == "seed") {
      cfg.seed = unsigned_field<std::uint64_t>(value, key);
    } else if (key == "timing") {
      cfg.timing = latency::parse_timing_model(value.dump());
    } else if (key == "timing_file") {
      if (!value.is_string()) fail(ErrorCode::kConfigInvalid, "'timing_file' must be a path");
      cfg.timing = latency::load_timing_model(value.get<std::string>());
    } else if (key == "sq_depth") {
      cfg.sq_depth = unsigned_field<std::uint32_t>(value, key);
    } else if (key == "cq_depth") {
      cfg.cq_depth = unsigned_field<std::uint32_t>(value, key);
    } else if (key == "host_memory_bytes") {
      cfg.host_memory_bytes = unsigned_field<std::size_t>(value, key);
    } else if (key == "cache_capacity") {
      cfg.cache_capacity = unsigned_field<std::size_t>(value, key);
    } else if (key == "queue_high_water") {
      cfg.queue_high_water = unsigned_field<std::size_t>(value, key);
    } else {
      fail(ErrorCode::kConfigInvalid, "unknown device config key '" + key + "'");
    }
  }
  return cfg;
}

std::string DeviceConfig::to_json() const {
  nlohmann::ordered_json doc;
  doc["num_qubits"] = num_qubits;
  if (coupling_preset == "edges") {
    doc["coupling"] = nlohmann::ordered_json::array();
    for (auto [a, b] : coupling_edges) doc["coupling"].push_back({a, b});
  } else {
    doc["coupling"] = coupling_preset;
  }
  doc["mode"] = to_string(mode);
  doc["bypass_transpile"] = bypass_transpile;
  doc["seed"] = seed;
  doc["timing"] = nlohmann::ordered_json::parse(latency::timing_model_json(timing));
  doc["sq_depth"] = sq_depth;
  doc["cq_depth"] = cq_depth;
  doc["host_memory_bytes"] = host_memory_bytes;
  doc["cache_capacity"] = cache_capacity;
  doc["queue_high_water"] = queue_high_water;
  return doc.dump(2) + "\n";
}

std::string DeviceInfo::to_json() const {
  nlohmann::ordered_json doc;
  doc["num_qubits"] = num_qubits;
  doc["caps"] = caps;
  doc["native_gates"] = nlohmann::ordered_json::array();
  for (auto op : native_gates) doc["native_gates"].push_back(std::string(mnemonic(op)));
  doc["coupling_preset"] = coupling_preset;
  doc["coupling_edges"] = nlohmann::ordered_json::array();
  for (auto [a, b] : coupling.edges()) doc["coupling_edges"].push_back({a, b});
  doc["modes"] = nlohmann::ordered_json::array();
  if (fidelity_mode) doc["modes"].push_back("fidelity");
  if (latency_mode) doc["modes"].push_back("latency");
  doc["active_mode"] = to_string(active_mode);
  doc["queue_depths"] = {{"sq", sq_depth}, {"cq", cq_depth}};
  return doc.dump(2) + "\n";
}

std::string DeviceInfo::to_text() const {
  std::ostringstream out;
  out << "qubits: " << num_qubits << "\n";
  out << "native gates:";
  for (auto op : native_gates) out << ' ' << mnemonic(op);
  out << "\ncoupling: " << coupling_preset << "\nedges:";
  for (auto [a, b] : coupling.edges()) out << " (" << a << "," << b << ")";
  out << "\nmodes:";
  if (fidelity_mode) out << " fidelity";
  if (latency_mode) out << " latency";
  out << "\nactive mode: " << to_string(active_mode) << "\n";
  out << "queue depths: sq " << sq_depth << ", cq " << cq_depth << "\n";
  return out.str();
}

}  // namespace qal::core
