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

// Flat host memory shared by the host driver and the device's DMA engine.
// Addresses are 64-bit and start at kBaseAddress; every access must fall
// inside one allocated region.

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace qal::qpx {

class HostMemory {
 public:
  static constexpr std::uint64_t kBaseAddress = 0x1'0000'0000ULL;

  explicit HostMemory(std::size_t capacity_bytes);

  // First-fit allocation; std::nullopt when no gap is large enough.
  std::optional<std::uint64_t> allocate(std::size_t len, std::size_t align = 64);
  void release(std::uint64_t addr);

  // Bounds-checked copies. A fault leaves memory untouched.
  std::optional<std::vector<std::uint8_t>> read(std::uint64_t addr, std::uint64_t len) const;
  bool write(std::uint64_t addr, std::span<const std::uint8_t> bytes);

  std::size_t capacity() const noexcept { return bytes_.size(); }
  std::size_t bytes_in_use() const;
  std::size_t region_count() const;

 private:
  // Offset of the region holding [addr, addr + len), if any.
  std::optional<std::size_t> locate(std::uint64_t addr, std::uint64_t len) const;

  mutable std::mutex mu_;
  std::vector<std::uint8_t> bytes_;
  std::map<std::size_t, std::size_t> regions_;  // offset -> length
};

}  // namespace qal::qpx
