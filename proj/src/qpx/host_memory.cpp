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
#include <cstring>

#include "qal/host_memory.hpp"

namespace qal::qpx {

HostMemory::HostMemory(std::size_t capacity_bytes) : bytes_(capacity_bytes, 0) {}

std::optional<std::uint64_t> HostMemory::allocate(std::size_t len, std::size_t align) {
  len = std::max<std::size_t>(len, 1);
  align = std::max<std::size_t>(align, 1);
  std::lock_guard lock(mu_);
  std::size_t cursor = 0;
  auto fits = [&](std::size_t gap_end) -> std::optional<std::size_t> {
    const std::size_t start = (cursor + align - 1) / align * align;
    if (start <= gap_end && gap_end - start >= len) return start;
    return std::nullopt;
  };
  for (const auto& [offset, size] : regions_) {
    if (auto start = fits(offset)) {
      regions_.emplace(*start, len);
      return kBaseAddress + *start;
    }
    cursor = offset + size;
  }
  if (auto start = fits(bytes_.size())) {
    regions_.emplace(*start, len);
    return kBaseAddress + *start;
  }
  return std::nullopt;
}

void HostMemory::release(std::uint64_t addr) {
  if (addr < kBaseAddress) return;
  std::lock_guard lock(mu_);
  regions_.erase(static_cast<std::size_t>(addr - kBaseAddress));
}

std::optional<std::size_t> HostMemory::locate(std::uint64_t addr, std::uint64_t len) const {
  if (addr < kBaseAddress) return std::nullopt;
  const std::uint64_t offset = addr - kBaseAddress;
  auto it = regions_.upper_bound(static_cast<std::size_t>(std::min<std::uint64_t>(offset, SIZE_MAX)));
  if (it == regions_.begin()) return std::nullopt;
  --it;
  const std::uint64_t region_start = it->first;
  const std::uint64_t region_end = region_start + it->second;
  if (offset >= region_end || len > region_end - offset) return std::nullopt;
  return static_cast<std::size_t>(offset);
}

std::optional<std::vector<std::uint8_t>> HostMemory::read(std::uint64_t addr, std::uint64_t len) const {
  if (len == 0) return std::vector<std::uint8_t>{};
  std::lock_guard lock(mu_);
  const auto at = locate(addr, len);
  if (!at) return std::nullopt;
  return std::vector<std::uint8_t>(bytes_.begin() + static_cast<std::ptrdiff_t>(*at),
                                   bytes_.begin() + static_cast<std::ptrdiff_t>(*at + len));
}

bool HostMemory::write(std::uint64_t addr, std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return true;
  std::lock_guard lock(mu_);
  const auto at = locate(addr, bytes.size());
  if (!at) return false;
  std::memcpy(bytes_.data() + *at, bytes.data(), bytes.size());
  return true;
}

std::size_t HostMemory::bytes_in_use() const {
  std::lock_guard lock(mu_);
  std::size_t total = 0;
  for (const auto& [offset, size] : regions_) total += size;
  return total;
}

std::size_t HostMemory::region_count() const {
  std::lock_guard lock(mu_);
  return regions_.size();
}

}  // namespace qal::qpx
