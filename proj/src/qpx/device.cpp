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

#include "common/byte_io.hpp"
#include "qal/error.hpp"
#include "qal/qpx_device.hpp"

namespace qal::qpx {

using detail::get_le;
using detail::put_le;

DeviceStatus status_for(ErrorCode decode_error) noexcept {
  switch (decode_error) {
    case ErrorCode::kBadMagic: return DeviceStatus::kBadMagic;
    case ErrorCode::kUnsupportedVersion: return DeviceStatus::kUnsupportedVersion;
    case ErrorCode::kQubitOutOfRange: return DeviceStatus::kQubitOutOfRange;
    case ErrorCode::kBadOpcode:
    case ErrorCode::kUnsupportedOpcode: return DeviceStatus::kBadOpcode;
    default: return DeviceStatus::kMalformedPayload;
  }
}

const char* to_string(DeviceStatus s) noexcept {
  switch (s) {
    case DeviceStatus::kOk: return "OK";
    case DeviceStatus::kBadMagic: return "BAD_MAGIC";
    case DeviceStatus::kUnsupportedVersion: return "UNSUPPORTED_VERSION";
    case DeviceStatus::kQubitOutOfRange: return "QUBIT_OUT_OF_RANGE";
    case DeviceStatus::kBadOpcode: return "BAD_OPCODE";
    case DeviceStatus::kDmaFault: return "DMA_FAULT";
    case DeviceStatus::kBadDoorbell: return "BAD_DOORBELL";
    case DeviceStatus::kCancelled: return "CANCELLED";
    case DeviceStatus::kMalformedPayload: return "MALFORMED_PAYLOAD";
  }
  return "UNKNOWN";
}

std::vector<std::uint8_t> SubmissionDescriptor::encode() const {
  std::vector<std::uint8_t> out;
  out.reserve(kRecordSize);
  put_le(out, job_id);
  put_le(out, payload_addr);
  put_le(out, payload_len);
  put_le(out, shots);
  put_le(out, flags);
  put_le(out, reserved);
  return out;
}

SubmissionDescriptor SubmissionDescriptor::decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kRecordSize) fail(ErrorCode::kMalformedPayload, "descriptor must be 32 bytes");
  return SubmissionDescriptor{get_le<std::uint64_t>(bytes, 0),  get_le<std::uint64_t>(bytes, 8),
                              get_le<std::uint32_t>(bytes, 16), get_le<std::uint32_t>(bytes, 20),
                              get_le<std::uint32_t>(bytes, 24), get_le<std::uint32_t>(bytes, 28)};
}

std::vector<std::uint8_t> CompletionRecord::encode() const {
  std::vector<std::uint8_t> out;
  out.reserve(kRecordSize);
  put_le(out, job_id);
  put_le(out, status);
  put_le(out, result_len);
  put_le(out, result_addr);
  put_le(out, exec_time_ns);
  return out;
}

CompletionRecord CompletionRecord::decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kRecordSize) fail(ErrorCode::kMalformedPayload, "completion record must be 32 bytes");
  return CompletionRecord{get_le<std::uint64_t>(bytes, 0), get_le<std::uint32_t>(bytes, 8),
                          get_le<std::uint32_t>(bytes, 12), get_le<std::uint64_t>(bytes, 16),
                          get_le<std::uint64_t>(bytes, 24)};
}

std::vector<std::uint8_t> encode_result(const qsim::Histogram& h) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + 16 * h.counts.size());
  put_le<std::uint32_t>(out, h.num_cbits);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(h.counts.size()));
  for (const auto& [key, count] : h.counts) {
    put_le<std::uint64_t>(out, key);
    put_le<std::uint64_t>(out, count);
  }
  return out;
}

qsim::Histogram decode_result(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) fail(ErrorCode::kMalformedPayload, "result shorter than its 8-byte header");
  qsim::Histogram h;
  h.num_cbits = get_le<std::uint32_t>(bytes, 0);
  const std::uint64_t entries = get_le<std::uint32_t>(bytes, 4);
  if (bytes.size() != 8 + 16 * entries) fail(ErrorCode::kMalformedPayload, "result length does not match entry count");
  for (std::uint64_t i = 0; i < entries; ++i) {
    const auto key = get_le<std::uint64_t>(bytes, 8 + 16 * i);
    const auto count = get_le<std::uint64_t>(bytes, 16 + 16 * i);
    if (!h.counts.empty() && key <= h.counts.rbegin()->first) {
      fail(ErrorCode::kMalformedPayload, "result keys must be strictly ascending");
    }
    h.counts.emplace_hint(h.counts.end(), key, count);
  }
  return h;
}

qsim::Histogram latency_placeholder(unsigned num_cbits) {
  qsim::Histogram h;
  h.num_cbits = num_cbits;
  for (unsigned k = 0; k < num_cbits; ++k) h.counts.emplace(k, 0);
  return h;
}

std::uint64_t job_seed(std::uint64_t device_seed, std::uint64_t job_id) noexcept {
  std::uint64_t z = device_seed ^ (job_id * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

QpxDevice::QpxDevice(DeviceModelConfig config, std::shared_ptr<HostMemory> memory)
    : config_(std::move(config)),
      memory_(std::move(memory)),
      cache_(std::make_shared<transpile::TranspileCache>(config_.cache_capacity)) {}

void QpxDevice::register_interrupt_sink(InterruptSink sink) { sink_ = std::move(sink); }

std::uint32_t QpxDevice::mmio_read(std::uint32_t offset) const {
  switch (offset) {
    case reg::kMagic: return kDeviceMagic;
    case reg::kVersion: return kDeviceVersion;
    case reg::kCaps: return (config_.target.num_qubits & 0xFFu) | kCapsFidelity | kCapsLatency;
    case reg::kCtrl: return ctrl_;
    case reg::kStatus: {
      std::uint32_t s = 0;
      if (ctrl_ & kCtrlEnable) s |= kStatusReady;
      if (busy_) s |= kStatusBusy;
      if (err_code_ != 0) s |= kStatusError;
      if (sq_head_ != sq_tail_ && cq_full()) s |= kStatusCqStalled;
      return s;
    }
    case reg::kDoorbell: return sq_tail_;
    case reg::kSqBaseLo: return sq_base_lo_;
    case reg::kSqBaseHi: return sq_base_hi_;
    case reg::kSqLen: return sq_len_;
    case reg::kCqBaseLo: return cq_base_lo_;
    case reg::kCqBaseHi: return cq_base_hi_;
    case reg::kCqLen: return cq_len_;
    case reg::kCqHead: return cq_head_;
    case reg::kIrqMask: return irq_mask_;
    case reg::kIrqStatus: return irq_status_;
    case reg::kErrCode: return err_code_;
    default: return kUnmapped;
  }
}

void QpxDevice::mmio_write(std::uint32_t offset, std::uint32_t value) {
  switch (offset) {
    case reg::kCtrl:
      if (value & kCtrlReset) {
        reset();
        return;
      }
      ctrl_ = value & (kCtrlEnable | kCtrlLatencyMode | kCtrlBypassTranspile);
      break;
    case reg::kDoorbell:
      if (value >= sq_len_) {
        set_error(DeviceStatus::kBadDoorbell);
        return;
      }
      sq_tail_ = value;
      break;
    case reg::kSqBaseLo: sq_base_lo_ = value; return;
    case reg::kSqBaseHi: sq_base_hi_ = value; return;
    case reg::kSqLen: sq_len_ = value; return;
    case reg::kCqBaseLo: cq_base_lo_ = value; return;
    case reg::kCqBaseHi: cq_base_hi_ = value; return;
    case reg::kCqLen: cq_len_ = value; return;
    case reg::kCqHead:
      if (value >= cq_len_) {
        set_error(DeviceStatus::kBadDoorbell);
        return;
      }
      cq_head_ = value;
      break;
    case reg::kIrqMask: {
      const std::uint32_t newly_enabled = value & ~irq_mask_;
      irq_mask_ = value & (kIrqCompletion | kIrqError);
      if ((irq_status_ & newly_enabled) != 0 && sink_) sink_();
      return;
    }
    case reg::kIrqStatus: irq_status_ &= ~value; return;
    case reg::kErrCode: err_code_ = 0; return;
    default: return;  // read-only or unmapped
  }
  if (auto_process_) process_submissions();
}

void QpxDevice::reset() {
  ctrl_ = 0;
  sq_tail_ = sq_head_ = 0;
  sq_base_lo_ = sq_base_hi_ = sq_len_ = 0;
  cq_base_lo_ = cq_base_hi_ = cq_len_ = 0;
  cq_head_ = cq_tail_ = 0;
  irq_mask_ = irq_status_ = err_code_ = 0;
  busy_ = false;
  ++epoch_;
  timeline_.reset();
  timings_.clear();
  cache_ = std::make_shared<transpile::TranspileCache>(config_.cache_capacity);
}

void QpxDevice::raise_irq(std::uint32_t bits) {
  const std::uint32_t rising = bits & ~irq_status_;
  irq_status_ |= bits;
  if ((rising & irq_mask_) != 0 && sink_) sink_();
}

void QpxDevice::set_error(DeviceStatus s) {
  err_code_ = static_cast<std::uint32_t>(s);
  raise_irq(kIrqError);
}

bool QpxDevice::cq_full() const noexcept { return cq_len_ < 2 || (cq_tail_ + 1) % cq_len_ == cq_head_; }

std::optional<std::vector<std::uint8_t>> QpxDevice::dma_read(std::uint64_t addr, std::uint64_t len) {
  auto bytes = memory_->read(addr, len);
  if (!bytes) set_error(DeviceStatus::kDmaFault);
  return bytes;
}

bool QpxDevice::dma_write(std::uint64_t addr, std::span<const std::uint8_t> bytes) {
  const bool ok = memory_->write(addr, bytes);
  if (!ok) set_error(DeviceStatus::kDmaFault);
  return ok;
}

bool QpxDevice::can_begin() const {
  return (ctrl_ & kCtrlEnable) && !busy_ && sq_len_ > 0 && sq_head_ != sq_tail_ && !cq_full();
}

std::optional<PendingJob> QpxDevice::begin_job() {
  if (!can_begin()) return std::nullopt;
  const std::uint64_t slot = sq_base() + std::uint64_t{sq_head_} * kRecordSize;
  sq_head_ = (sq_head_ + 1) % sq_len_;
  const auto raw = dma_read(slot, kRecordSize);
  if (!raw) return std::nullopt;

  PendingJob job;
  job.epoch = epoch_;
  job.desc = SubmissionDescriptor::decode(*raw);
  job.latency_mode = (ctrl_ & kCtrlLatencyMode) || (job.desc.flags & kDescFlagLatency);
  job.bypass_transpile = (ctrl_ & kCtrlBypassTranspile) != 0;
  job.begin_ns = timeline_.now();
  job.cache = cache_;
  if (job.desc.reserved != 0) {
    job.fetch_status = DeviceStatus::kMalformedPayload;
  } else if (auto payload = dma_read(job.desc.payload_addr, job.desc.payload_len)) {
    job.payload = std::move(*payload);
  } else {
    job.fetch_status = DeviceStatus::kDmaFault;
  }
  busy_ = true;
  return job;
}

JobOutcome QpxDevice::execute(const PendingJob& job) const {
  JobOutcome out;
  out.epoch = job.epoch;
  out.job_id = job.desc.job_id;
  out.payload_len = job.desc.payload_len;
  out.begin_ns = job.begin_ns;
  out.status = job.fetch_status;
  if (out.status != DeviceStatus::kOk) return out;
  if (job.desc.shots == 0) {
    out.status = DeviceStatus::kMalformedPayload;
    return out;
  }
  try {
    const Circuit circuit = decode_binary(job.payload);
    if (circuit.num_qubits > config_.target.num_qubits) {
      out.status = DeviceStatus::kQubitOutOfRange;
      return out;
    }
    out.counts = latency::count_gates(circuit);
    out.shots = job.desc.shots;
    if (job.latency_mode) {
      out.result = encode_result(latency_placeholder(circuit.num_cbits));
      return out;
    }
    const Circuit runnable =
        job.bypass_transpile ? circuit : transpile::transpile(circuit, config_.target, *job.cache).circuit;
    out.result = encode_result(qsim::run_circuit(runnable, job.desc.shots, job_seed(config_.seed, out.job_id)));
  } catch (const Error& e) {
    out.status = status_for(e.code());
  } catch (const std::exception&) {
    out.status = DeviceStatus::kMalformedPayload;
  }
  if (out.status != DeviceStatus::kOk) {
    out.result.clear();
    out.counts = {};
    out.shots = 0;
  }
  return out;
}

void QpxDevice::finish_job(JobOutcome outcome) {
  if (outcome.epoch != epoch_) return;  // reset while the job ran
  busy_ = false;

  CompletionRecord rec;
  rec.job_id = outcome.job_id;
  rec.status = static_cast<std::uint32_t>(outcome.status);
  if (outcome.status == DeviceStatus::kOk) {
    const auto region = memory_->allocate(outcome.result.size());
    if (region && dma_write(*region, outcome.result)) {
      rec.result_addr = *region;
      rec.result_len = static_cast<std::uint32_t>(outcome.result.size());
      rec.exec_time_ns = latency::execution_term(config_.timing, outcome.counts, outcome.shots);
    } else {
      if (region) memory_->release(*region);
      set_error(DeviceStatus::kDmaFault);
      rec.status = static_cast<std::uint32_t>(DeviceStatus::kDmaFault);
      outcome.counts = {};
      outcome.shots = 0;
    }
  }

  const auto constants = latency::SchedulerConstants::from(config_.timing);
  const std::uint64_t duration =
      constants.descriptor_fetch_ns + latency::predict_job_latency(config_.timing, outcome.payload_len,
                                                                   rec.result_len, outcome.counts, outcome.shots);
  const auto span = timeline_.schedule(outcome.begin_ns, duration);
  timings_[rec.job_id] = JobTiming{span.begin, span.end, rec.exec_time_ns};

  const std::uint64_t slot = cq_base() + std::uint64_t{cq_tail_} * kRecordSize;
  if (!dma_write(slot, rec.encode())) {
    if (rec.result_addr != 0) memory_->release(rec.result_addr);
    return;
  }
  cq_tail_ = (cq_tail_ + 1) % cq_len_;
  raise_irq(kIrqCompletion);
}

void QpxDevice::process_submissions() {
  if (processing_) return;
  processing_ = true;
  while (can_begin()) {
    if (auto job = begin_job()) finish_job(execute(*job));
  }
  processing_ = false;
}

std::optional<JobTiming> QpxDevice::take_timing(std::uint64_t job_id) {
  const auto it = timings_.find(job_id);
  if (it == timings_.end()) return std::nullopt;
  auto t = it->second;
  timings_.erase(it);
  return t;
}

DeviceRunner::DeviceRunner(DeviceModelConfig config, std::shared_ptr<HostMemory> memory)
    : memory_(memory), device_(std::move(config), std::move(memory)) {
  device_.set_auto_process(false);
  // Called with mu_ held from inside the device state machine.
  device_.register_interrupt_sink([this] {
    notify_pending_ = true;
    cv_.notify_all();
  });
  thread_ = std::thread([this] { loop(); });
}

DeviceRunner::~DeviceRunner() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

std::uint32_t DeviceRunner::mmio_read(std::uint32_t offset) {
  std::lock_guard lock(mu_);
  return device_.mmio_read(offset);
}

void DeviceRunner::mmio_write(std::uint32_t offset, std::uint32_t value) {
  {
    std::lock_guard lock(mu_);
    device_.mmio_write(offset, value);
  }
  cv_.notify_all();
}

void DeviceRunner::register_interrupt_sink(QpxDevice::InterruptSink sink) {
  std::lock_guard lock(mu_);
  user_sink_ = std::move(sink);
}

void DeviceRunner::hold(bool on) {
  {
    std::lock_guard lock(mu_);
    held_ = on;
  }
  cv_.notify_all();
  idle_cv_.notify_all();
}

void DeviceRunner::wait_idle() {
  std::unique_lock lock(mu_);
  idle_cv_.wait(lock, [&] { return !executing_ && !notify_pending_ && !delivering_ && (held_ || !device_.can_begin()); });
}

std::uint64_t DeviceRunner::model_time_ns() {
  std::lock_guard lock(mu_);
  return device_.model_time_ns();
}

std::optional<JobTiming> DeviceRunner::take_timing(std::uint64_t job_id) {
  std::lock_guard lock(mu_);
  return device_.take_timing(job_id);
}

transpile::CacheStats DeviceRunner::cache_stats() {
  std::lock_guard lock(mu_);
  return device_.cache_stats();
}

void DeviceRunner::loop() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait(lock, [&] { return stop_ || notify_pending_ || (!held_ && device_.can_begin()); });
    if (stop_) break;
    if (notify_pending_) {
      notify_pending_ = false;
      delivering_ = true;
      auto sink = user_sink_;
      lock.unlock();
      if (sink) sink();
      lock.lock();
      delivering_ = false;
      idle_cv_.notify_all();
      continue;
    }
    auto job = device_.begin_job();
    if (!job) continue;
    executing_ = true;
    lock.unlock();
    auto outcome = device_.execute(*job);
    lock.lock();
    device_.finish_job(std::move(outcome));
    executing_ = false;
    idle_cv_.notify_all();
  }
}

}  // namespace qal::qpx
