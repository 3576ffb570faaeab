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

// Register-level model of the QPX quantum accelerator.
//
// The host programs a submission ring (SQ) and a completion ring (CQ) in
// host memory, writes 32-byte descriptors into the SQ and rings DOORBELL
// with the new SQ tail. The device DMA-reads each payload, runs it, writes a
// result region, appends a 32-byte completion record to the CQ and raises
// IRQ_STATUS bit 0. A CQ slot is valid while its job_id is nonzero; the host
// zeroes consumed slots and reports progress through CQ_HEAD. One CQ slot is
// always left empty, so the device stalls when tail + 1 == head.

#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <vector>

#include "qal/circuit.hpp"
#include "qal/error.hpp"
#include "qal/host_memory.hpp"
#include "qal/latency.hpp"
#include "qal/qsim.hpp"
#include "qal/transpile.hpp"

namespace qal::qpx {

namespace reg {
inline constexpr std::uint32_t kMagic = 0x00;
inline constexpr std::uint32_t kVersion = 0x04;
inline constexpr std::uint32_t kCaps = 0x08;
inline constexpr std::uint32_t kCtrl = 0x0C;
inline constexpr std::uint32_t kStatus = 0x10;
inline constexpr std::uint32_t kDoorbell = 0x14;
inline constexpr std::uint32_t kSqBaseLo = 0x18;
inline constexpr std::uint32_t kSqBaseHi = 0x1C;
inline constexpr std::uint32_t kSqLen = 0x20;
inline constexpr std::uint32_t kCqBaseLo = 0x24;
inline constexpr std::uint32_t kCqBaseHi = 0x28;
inline constexpr std::uint32_t kCqLen = 0x2C;
inline constexpr std::uint32_t kCqHead = 0x30;
inline constexpr std::uint32_t kIrqMask = 0x34;
inline constexpr std::uint32_t kIrqStatus = 0x38;
inline constexpr std::uint32_t kErrCode = 0x3C;
}  // namespace reg

inline constexpr std::uint32_t kDeviceMagic = 0x51504558;  // "QPEX"
inline constexpr std::uint32_t kDeviceVersion = 0x00010000;
inline constexpr std::uint32_t kUnmapped = 0xFFFFFFFF;

inline constexpr std::uint32_t kCtrlEnable = 1u << 0;
inline constexpr std::uint32_t kCtrlReset = 1u << 1;
inline constexpr std::uint32_t kCtrlLatencyMode = 1u << 2;
inline constexpr std::uint32_t kCtrlBypassTranspile = 1u << 3;

inline constexpr std::uint32_t kStatusReady = 1u << 0;
inline constexpr std::uint32_t kStatusBusy = 1u << 1;
inline constexpr std::uint32_t kStatusError = 1u << 2;
inline constexpr std::uint32_t kStatusCqStalled = 1u << 3;

inline constexpr std::uint32_t kCapsFidelity = 1u << 8;
inline constexpr std::uint32_t kCapsLatency = 1u << 9;

inline constexpr std::uint32_t kIrqCompletion = 1u << 0;
inline constexpr std::uint32_t kIrqError = 1u << 1;

inline constexpr std::uint32_t kDescFlagLatency = 1u << 0;

// Completion status / ERR_CODE values.
enum class DeviceStatus : std::uint32_t {
  kOk = 0,
  kBadMagic = 1,
  kUnsupportedVersion = 2,
  kQubitOutOfRange = 3,
  kBadOpcode = 4,
  kDmaFault = 5,
  kBadDoorbell = 6,
  kCancelled = 7,
  kMalformedPayload = 8,
};

DeviceStatus status_for(ErrorCode decode_error) noexcept;
const char* to_string(DeviceStatus s) noexcept;

inline constexpr std::size_t kRecordSize = 32;

struct SubmissionDescriptor {
  std::uint64_t job_id = 0;
  std::uint64_t payload_addr = 0;
  std::uint32_t payload_len = 0;
  std::uint32_t shots = 0;
  std::uint32_t flags = 0;
  std::uint32_t reserved = 0;

  std::vector<std::uint8_t> encode() const;
  static SubmissionDescriptor decode(std::span<const std::uint8_t> bytes);
  friend bool operator==(const SubmissionDescriptor&, const SubmissionDescriptor&) = default;
};

struct CompletionRecord {
  std::uint64_t job_id = 0;
  std::uint32_t status = 0;
  std::uint32_t result_len = 0;
  std::uint64_t result_addr = 0;
  std::uint64_t exec_time_ns = 0;

  std::vector<std::uint8_t> encode() const;
  static CompletionRecord decode(std::span<const std::uint8_t> bytes);
  friend bool operator==(const CompletionRecord&, const CompletionRecord&) = default;
};

// u32 num_cbits, u32 num_entries, then {u64 key, u64 count} with ascending keys.
std::vector<std::uint8_t> encode_result(const qsim::Histogram& h);
// Throws kMalformedPayload on bad length or unsorted keys.
qsim::Histogram decode_result(std::span<const std::uint8_t> bytes);

// Placeholder produced in Latency Mode: one zero-count entry per classical
// bit (keys 0..num_cbits-1).
qsim::Histogram latency_placeholder(unsigned num_cbits);

// Fidelity-mode RNG seed for a job; splitmix64 of the mixed inputs.
std::uint64_t job_seed(std::uint64_t device_seed, std::uint64_t job_id) noexcept;

struct DeviceModelConfig {
  transpile::Target target;
  latency::TimingModel timing = latency::TimingModel::defaults();
  std::uint64_t seed = 0;
  std::size_t cache_capacity = 1024;
};

// Model-time trace of one job, kept as device telemetry.
struct JobTiming {
  std::uint64_t begin_ns = 0;
  std::uint64_t end_ns = 0;
  std::uint64_t exec_ns = 0;
};

// Work captured when the engine accepts a descriptor. Execution only needs
// this snapshot, so it can run while MMIO traffic continues.
struct PendingJob {
  std::uint64_t epoch = 0;
  SubmissionDescriptor desc;
  std::vector<std::uint8_t> payload;
  DeviceStatus fetch_status = DeviceStatus::kOk;
  bool latency_mode = false;
  bool bypass_transpile = false;
  std::uint64_t begin_ns = 0;
  std::shared_ptr<transpile::TranspileCache> cache;
};

struct JobOutcome {
  std::uint64_t epoch = 0;
  std::uint64_t job_id = 0;
  DeviceStatus status = DeviceStatus::kOk;
  std::vector<std::uint8_t> result;
  latency::GateCounts counts;
  std::uint64_t shots = 0;
  std::uint64_t payload_len = 0;
  std::uint64_t begin_ns = 0;
};

// Single-threaded device state machine. Not thread-safe; DeviceRunner
// serialises access for concurrent hosts.
class QpxDevice {
 public:
  using InterruptSink = std::function<void()>;

  QpxDevice(DeviceModelConfig config, std::shared_ptr<HostMemory> memory);

  std::uint32_t mmio_read(std::uint32_t offset) const;
  void mmio_write(std::uint32_t offset, std::uint32_t value);

  // Invoked once per 0->1 transition of an unmasked IRQ_STATUS bit, and on
  // unmask while a bit is pending.
  void register_interrupt_sink(InterruptSink sink);

  std::optional<std::vector<std::uint8_t>> dma_read(std::uint64_t addr, std::uint64_t len);
  bool dma_write(std::uint64_t addr, std::span<const std::uint8_t> bytes);

  bool can_begin() const;
  std::optional<PendingJob> begin_job();
  JobOutcome execute(const PendingJob& job) const;
  void finish_job(JobOutcome outcome);
  // Runs begin/execute/finish until the SQ drains or the CQ fills.
  void process_submissions();

  // When set (the default), DOORBELL, CQ_HEAD and CTRL writes drive
  // process_submissions inline.
  void set_auto_process(bool on) noexcept { auto_process_ = on; }

  std::uint64_t model_time_ns() const noexcept { return timeline_.now(); }
  std::optional<JobTiming> take_timing(std::uint64_t job_id);
  transpile::CacheStats cache_stats() const { return cache_->stats(); }
  const DeviceModelConfig& config() const noexcept { return config_; }

 private:
  void reset();
  void raise_irq(std::uint32_t bits);
  void set_error(DeviceStatus s);
  std::uint64_t sq_base() const noexcept { return (std::uint64_t{sq_base_hi_} << 32) | sq_base_lo_; }
  std::uint64_t cq_base() const noexcept { return (std::uint64_t{cq_base_hi_} << 32) | cq_base_lo_; }
  bool cq_full() const noexcept;

  DeviceModelConfig config_;
  std::shared_ptr<HostMemory> memory_;
  std::shared_ptr<transpile::TranspileCache> cache_;
  InterruptSink sink_;
  bool auto_process_ = true;

  std::uint32_t ctrl_ = 0;
  std::uint32_t sq_tail_ = 0;
  std::uint32_t sq_head_ = 0;
  std::uint32_t sq_base_lo_ = 0;
  std::uint32_t sq_base_hi_ = 0;
  std::uint32_t sq_len_ = 0;
  std::uint32_t cq_base_lo_ = 0;
  std::uint32_t cq_base_hi_ = 0;
  std::uint32_t cq_len_ = 0;
  std::uint32_t cq_head_ = 0;
  std::uint32_t cq_tail_ = 0;
  std::uint32_t irq_mask_ = 0;
  std::uint32_t irq_status_ = 0;
  std::uint32_t err_code_ = 0;
  bool busy_ = false;
  bool processing_ = false;
  std::uint64_t epoch_ = 0;

  latency::EngineTimeline timeline_;
  std::unordered_map<std::uint64_t, JobTiming> timings_;
};

// Thread-safe facade: one device loop thread executes jobs; MMIO calls from
// any thread are serialised with the loop in arrival order. Job execution
// runs outside the lock, so STATUS reads observe BUSY while a job runs. The
// interrupt sink is always invoked from the loop thread.
class DeviceRunner {
 public:
  DeviceRunner(DeviceModelConfig config, std::shared_ptr<HostMemory> memory);
  ~DeviceRunner();
  DeviceRunner(const DeviceRunner&) = delete;
  DeviceRunner& operator=(const DeviceRunner&) = delete;

  std::uint32_t mmio_read(std::uint32_t offset);
  void mmio_write(std::uint32_t offset, std::uint32_t value);
  void register_interrupt_sink(QpxDevice::InterruptSink sink);

  // Halts the engine before it accepts the next descriptor.
  void hold(bool on);
  // Blocks until the engine has nothing it could start.
  void wait_idle();

  std::uint64_t model_time_ns();
  std::optional<JobTiming> take_timing(std::uint64_t job_id);
  transpile::CacheStats cache_stats();
  const HostMemory& memory() const { return *memory_; }

 private:
  void loop();

  std::shared_ptr<HostMemory> memory_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  QpxDevice device_;
  QpxDevice::InterruptSink user_sink_;
  bool notify_pending_ = false;
  bool delivering_ = false;  // sink running with mu_ released
  bool held_ = false;
  bool executing_ = false;
  bool stop_ = false;
  std::thread thread_;
};

}  // namespace qal::qpx
