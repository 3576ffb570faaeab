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
#include <string>

#include "common/byte_io.hpp"
#include "qal/error.hpp"
#include "qal/qal_core.hpp"

namespace qal::core {

using qpx::reg::kCqBaseHi;
using qpx::reg::kCqBaseLo;
using qpx::reg::kCqHead;
using qpx::reg::kCqLen;
using qpx::reg::kCtrl;
using qpx::reg::kDoorbell;
using qpx::reg::kErrCode;
using qpx::reg::kIrqMask;
using qpx::reg::kIrqStatus;
using qpx::reg::kSqBaseHi;
using qpx::reg::kSqBaseLo;
using qpx::reg::kSqLen;

std::unique_ptr<Session> Session::open(const DeviceConfig& config, std::unique_ptr<SchedulingPolicy> policy) {
  config.validate();
  return std::unique_ptr<Session>(new Session(config, std::move(policy)));
}

Session::Session(const DeviceConfig& config, std::unique_ptr<SchedulingPolicy> policy)
    : config_(config),
      coupling_(config.coupling()),
      memory_(std::make_shared<qpx::HostMemory>(config.host_memory_bytes)),
      policy_(policy ? std::move(policy) : std::make_unique<StrictPriorityFifo>()) {
  qpx::DeviceModelConfig model;
  model.target.num_qubits = config.num_qubits;
  model.target.coupling = coupling_;
  model.timing = config.timing;
  model.seed = config.seed;
  model.cache_capacity = config.cache_capacity;
  runner_ = std::make_unique<qpx::DeviceRunner>(std::move(model), memory_);

  const auto sq = memory_->allocate(std::size_t{config.sq_depth} * qpx::kRecordSize);
  const auto cq = memory_->allocate(std::size_t{config.cq_depth} * qpx::kRecordSize);
  if (!sq || !cq) fail(ErrorCode::kConfigInvalid, "host memory too small for the queue rings");
  sq_addr_ = *sq;
  cq_addr_ = *cq;
  memory_->write(cq_addr_, std::vector<std::uint8_t>(std::size_t{config.cq_depth} * qpx::kRecordSize, 0));

  runner_->register_interrupt_sink([this] { wake(true); });
  runner_->mmio_write(kSqBaseLo, static_cast<std::uint32_t>(sq_addr_));
  runner_->mmio_write(kSqBaseHi, static_cast<std::uint32_t>(sq_addr_ >> 32));
  runner_->mmio_write(kSqLen, config.sq_depth);
  runner_->mmio_write(kCqBaseLo, static_cast<std::uint32_t>(cq_addr_));
  runner_->mmio_write(kCqBaseHi, static_cast<std::uint32_t>(cq_addr_ >> 32));
  runner_->mmio_write(kCqLen, config.cq_depth);
  runner_->mmio_write(kCqHead, 0);
  runner_->mmio_write(kIrqMask, qpx::kIrqCompletion | qpx::kIrqError);
  std::uint32_t ctrl = qpx::kCtrlEnable;
  if (config.mode == ExecMode::kLatency) ctrl |= qpx::kCtrlLatencyMode;
  if (config.bypass_transpile) ctrl |= qpx::kCtrlBypassTranspile;
  runner_->mmio_write(kCtrl, ctrl);

  service_ = std::thread([this] { service_loop(); });
}

Session::~Session() {
  {
    std::lock_guard lock(wake_mu_);
    stop_ = true;
  }
  wake_cv_.notify_all();
  service_.join();
  runner_.reset();
}

void Session::wake(bool interrupt) {
  {
    std::lock_guard lock(wake_mu_);
    if (interrupt) {
      irq_ = true;
    } else {
      kick_ = true;
    }
  }
  wake_cv_.notify_one();
}

Session::Job& Session::find(JobId id) {
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) fail(ErrorCode::kUnknownJob, "unknown job " + std::to_string(id));
  return it->second;
}

const Session::Job& Session::find(JobId id) const {
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) fail(ErrorCode::kUnknownJob, "unknown job " + std::to_string(id));
  return it->second;
}

void Session::move_to(Job& job, JobState to) {
  const JobState from = job.rec.state;
  if (!transition_allowed(from, to)) {
    fail(ErrorCode::kInternal, std::string("illegal job transition ") + to_string(from) + " -> " + to_string(to));
  }
  job.rec.state = to;
  log_.push_back(Transition{job.rec.id, from, to});
  if (from == JobState::kQueued) --counters_.queued;
  if (from == JobState::kDispatched || from == JobState::kRunning) {
    if (to != JobState::kRunning) --counters_.in_flight;
  }
  switch (to) {
    case JobState::kQueued: ++counters_.queued; break;
    case JobState::kDispatched: ++counters_.in_flight; break;
    case JobState::kDone: ++counters_.done; break;
    case JobState::kFailed: ++counters_.failed; break;
    case JobState::kCancelled: ++counters_.cancelled; break;
    default: break;
  }
}

JobId Session::submit(std::span<const std::uint8_t> payload, std::uint32_t shots, unsigned priority,
                      std::uint32_t flags) {
  if (shots < 1) fail(ErrorCode::kInvalidArgument, "shots must be at least 1");
  if (priority > kMaxPriority) fail(ErrorCode::kInvalidArgument, "priority must be in 0..7");
  if (payload.size() < kHeaderSize) fail(ErrorCode::kBadHeader, "payload shorter than the 16-byte header");
  if (detail::get_le<std::uint32_t>(payload, 0) != kBinaryMagic) fail(ErrorCode::kBadHeader, "payload magic is not QALB");
  if (detail::get_le<std::uint16_t>(payload, 4) != kBinaryVersion) {
    fail(ErrorCode::kBadHeader, "unsupported payload version");
  }
  if (payload.size() > config_.host_memory_bytes / 4 || payload.size() > UINT32_MAX) {
    fail(ErrorCode::kInvalidArgument, "payload too large for host memory");
  }

  const std::uint64_t model_now = runner_->model_time_ns();
  JobId id = 0;
  {
    std::lock_guard lock(mu_);
    if (counters_.queued + counters_.in_flight >= config_.queue_high_water) {
      fail(ErrorCode::kQueueSaturated, "software queue is at its high-water mark");
    }
    id = next_id_++;
    Job job;
    job.rec.id = id;
    job.rec.priority = priority;
    job.rec.seq = next_seq_++;
    job.rec.shots = shots;
    job.rec.flags = flags;
    job.rec.payload_len = payload.size();
    job.rec.submitted_at = std::chrono::steady_clock::now();
    job.rec.model_submit_ns = model_now;
    job.payload.assign(payload.begin(), payload.end());
    auto& stored = jobs_.emplace(id, std::move(job)).first->second;
    ++counters_.submitted;
    move_to(stored, JobState::kQueued);
    policy_->push(QueueEntry{id, priority, stored.rec.seq});
  }
  wake(false);
  return id;
}

JobState Session::check(JobId id) const {
  std::lock_guard lock(mu_);
  return find(id).rec.state;
}

JobState Session::wait(JobId id, std::optional<std::chrono::nanoseconds> timeout) {
  std::unique_lock lock(mu_);
  find(id);
  auto done = [&] {
    const auto it = jobs_.find(id);
    return it == jobs_.end() || is_terminal(it->second.rec.state);
  };
  if (timeout) {
    state_cv_.wait_for(lock, *timeout, done);
  } else {
    state_cv_.wait(lock, done);
  }
  const JobState state = find(id).rec.state;
  if (!is_terminal(state)) fail(ErrorCode::kTimedOut, "job " + std::to_string(id) + " still " + to_string(state));
  return state;
}

qsim::Histogram Session::get_results(JobId id) const {
  std::lock_guard lock(mu_);
  const auto& job = find(id);
  switch (job.rec.state) {
    case JobState::kDone: return *job.rec.result;
    case JobState::kFailed:
    case JobState::kCancelled: {
      const auto status = static_cast<qpx::DeviceStatus>(*job.rec.error);
      Error err(ErrorCode::kJobFailed, "job " + std::to_string(id) + " is " + to_string(job.rec.state) +
                                           " (device status " + std::to_string(*job.rec.error) + " " +
                                           qpx::to_string(status) + ")");
      err.device_status = *job.rec.error;
      throw err;
    }
    default:
      fail(ErrorCode::kNotFinished, "job " + std::to_string(id) + " is " + to_string(job.rec.state));
  }
}

void Session::cancel(JobId id) {
  {
    std::lock_guard lock(mu_);
    auto& job = find(id);
    if (job.rec.state != JobState::kQueued) {
      fail(ErrorCode::kTooLateToCancel, "job " + std::to_string(id) + " is " + to_string(job.rec.state));
    }
    policy_->remove(id);
    move_to(job, JobState::kCancelled);
    job.rec.error = static_cast<std::uint32_t>(qpx::DeviceStatus::kCancelled);
    job.rec.completed_at = std::chrono::steady_clock::now();
    job.payload.clear();
  }
  state_cv_.notify_all();
}

void Session::free(JobId id) {
  std::lock_guard lock(mu_);
  const auto& job = find(id);
  if (!is_terminal(job.rec.state)) fail(ErrorCode::kNotFinished, "job " + std::to_string(id) + " is still live");
  jobs_.erase(id);
}

DeviceInfo Session::query() const {
  DeviceInfo info;
  info.caps = runner_->mmio_read(qpx::reg::kCaps);
  info.num_qubits = info.caps & 0xFFu;
  info.fidelity_mode = (info.caps & qpx::kCapsFidelity) != 0;
  info.latency_mode = (info.caps & qpx::kCapsLatency) != 0;
  info.native_gates = transpile::default_native_gates();
  info.coupling = coupling_;
  info.coupling_preset = config_.coupling_preset;
  info.active_mode = config_.mode;
  info.sq_depth = config_.sq_depth;
  info.cq_depth = config_.cq_depth;
  return info;
}

JobRecord Session::record(JobId id) const {
  std::lock_guard lock(mu_);
  return find(id).rec;
}

std::vector<Transition> Session::transition_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

Counters Session::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

void Session::pause_dispatch() {
  std::lock_guard lock(mu_);
  paused_ = true;
}

void Session::resume_dispatch() {
  {
    std::lock_guard lock(mu_);
    paused_ = false;
  }
  wake(false);
}

void Session::wait_quiescent() {
  std::unique_lock lock(mu_);
  state_cv_.wait(lock, [&] { return counters_.queued == 0 && counters_.in_flight == 0; });
}

void Session::service_loop() {
  while (true) {
    bool interrupt = false;
    {
      std::unique_lock lock(wake_mu_);
      wake_cv_.wait(lock, [&] { return stop_ || irq_ || kick_; });
      if (stop_) return;
      interrupt = std::exchange(irq_, false);
      kick_ = false;
    }
    if (interrupt) handle_interrupt();
    dispatch();
  }
}

void Session::handle_interrupt() {
  const std::uint32_t pending = runner_->mmio_read(kIrqStatus);
  runner_->mmio_write(kIrqStatus, pending);
  if (pending & qpx::kIrqError) runner_->mmio_write(kErrCode, 0);

  bool progressed = false;
  while (true) {
    const std::uint64_t slot = cq_addr_ + std::uint64_t{cq_head_} * qpx::kRecordSize;
    const auto raw = memory_->read(slot, qpx::kRecordSize);
    if (!raw) break;
    const auto rec = qpx::CompletionRecord::decode(*raw);
    if (rec.job_id == 0) break;
    memory_->write(slot, std::vector<std::uint8_t>(qpx::kRecordSize, 0));
    cq_head_ = (cq_head_ + 1) % config_.cq_depth;
    progressed = true;

    std::optional<qsim::Histogram> result;
    if (rec.status == 0) {
      if (auto bytes = memory_->read(rec.result_addr, rec.result_len)) {
        try {
          result = qpx::decode_result(*bytes);
        } catch (const Error&) {
        }
      }
    }
    if (rec.result_addr != 0) memory_->release(rec.result_addr);
    complete(rec, std::move(result), runner_->take_timing(rec.job_id));
  }
  if (progressed) runner_->mmio_write(kCqHead, cq_head_);
}

void Session::complete(const qpx::CompletionRecord& rec, std::optional<qsim::Histogram> result,
                       std::optional<qpx::JobTiming> timing) {
  {
    std::lock_guard lock(mu_);
    if (in_flight_.empty() || in_flight_.front() != rec.job_id) {
      // Out-of-order completion from an in-order engine; drop it rather than
      // corrupt another job's state.
      return;
    }
    in_flight_.pop_front();
    auto& job = find(rec.job_id);
    if (job.payload_addr != 0) memory_->release(job.payload_addr);
    job.payload_addr = 0;
    job.rec.result_len = rec.result_len;
    job.rec.exec_time_ns = rec.exec_time_ns;
    job.rec.completed_at = std::chrono::steady_clock::now();
    if (timing) {
      job.rec.model_begin_ns = timing->begin_ns;
      job.rec.model_end_ns = timing->end_ns;
    }
    if (rec.status == 0 && result) {
      job.rec.result = std::move(result);
      move_to(job, JobState::kDone);
    } else {
      job.rec.error = rec.status != 0 ? rec.status : static_cast<std::uint32_t>(qpx::DeviceStatus::kMalformedPayload);
      move_to(job, JobState::kFailed);
    }
    promote_head();
  }
  state_cv_.notify_all();
}

void Session::promote_head() {
  if (in_flight_.empty()) return;
  auto& head = find(in_flight_.front());
  if (head.rec.state == JobState::kDispatched) move_to(head, JobState::kRunning);
}

void Session::dispatch() {
  bool changed = false;
  {
    std::lock_guard lock(mu_);
    while (!paused_ && in_flight_.size() + 1 < config_.sq_depth && policy_->size() > 0) {
      const auto entry = policy_->pop();
      auto& job = find(entry->job);
      const auto addr = memory_->allocate(job.payload.size());
      if (!addr) {
        // Host memory exhausted; completions will free regions and wake us.
        policy_->push(*entry);
        break;
      }
      memory_->write(*addr, job.payload);
      job.payload_addr = *addr;

      qpx::SubmissionDescriptor desc;
      desc.job_id = job.rec.id;
      desc.payload_addr = *addr;
      desc.payload_len = static_cast<std::uint32_t>(job.payload.size());
      desc.shots = job.rec.shots;
      desc.flags = job.rec.flags;
      memory_->write(sq_addr_ + std::uint64_t{sq_tail_} * qpx::kRecordSize, desc.encode());
      sq_tail_ = (sq_tail_ + 1) % config_.sq_depth;
      job.payload.clear();
      job.payload.shrink_to_fit();

      move_to(job, JobState::kDispatched);
      job.rec.dispatched_at = std::chrono::steady_clock::now();
      in_flight_.push_back(job.rec.id);
      promote_head();
      runner_->mmio_write(kDoorbell, sq_tail_);
      changed = true;
    }
  }
  if (changed) state_cv_.notify_all();
}

}  // namespace qal::core
