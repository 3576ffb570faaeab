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
#include "qal/transpile.hpp"

namespace qal::transpile {

TranspileCache::TranspileCache(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) fail(ErrorCode::kConfigInvalid, "transpile cache capacity must be positive");
}

std::optional<TranspiledCircuit> TranspileCache::lookup(const std::string& key) {
  std::lock_guard lock(mu_);
  const auto it = index_.find(key);
  if (it == index_.end()) {
    ++stats_.misses;
    return std::nullopt;
  }
  ++stats_.hits;
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->second;
}

void TranspileCache::insert(const std::string& key, TranspiledCircuit value) {
  std::lock_guard lock(mu_);
  if (const auto it = index_.find(key); it != index_.end()) {
    it->second->second = std::move(value);
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  while (lru_.size() >= capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
    ++stats_.evictions;
  }
  lru_.emplace_front(key, std::move(value));
  index_.emplace(key, lru_.begin());
}

std::size_t TranspileCache::size() const {
  std::lock_guard lock(mu_);
  return lru_.size();
}

CacheStats TranspileCache::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::string cache_key(const Circuit& c, const Target& target) {
  const auto bytes = encode_binary(c);
  std::string key(bytes.begin(), bytes.end());
  key += "|v" + std::to_string(target.coupling.num_vertices()) + "|";
  for (auto [a, b] : target.coupling.canonical_edges()) key += std::to_string(a) + "-" + std::to_string(b) + ",";
  key += "|";
  for (auto op : target.native_gates) key += static_cast<char>(op);
  return key;
}

TranspiledCircuit transpile(const Circuit& c, const Target& target, TranspileCache& cache) {
  const auto key = cache_key(c, target);
  if (auto hit = cache.lookup(key)) return *std::move(hit);
  auto result = route(decompose(c, target.native_gates), target.coupling);
  cache.insert(key, result);
  return result;
}

}  // namespace qal::transpile
