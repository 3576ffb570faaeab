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

// Host-side Quantum Abstraction Layer: job lifecycle, scheduling, device
// dispatch over the QPX rings and completion handling.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "qal/latency.hpp"
#include "qal/qpx_device.hpp"
#include "qal/qsim.hpp"
#include "qal/transpile.hpp"

namespace qal::core {

using JobId = std::uint64_t;

enum class JobState : std::uint8_t {
  kCreated = 0,
  kQueued = 1,
  kDispatched = 2,
  kRunning = 3,
  kDone = 4,
  kFailed = 5,
  kCancelled = 6,
};

inline constexpr unsigned kNumJobStates = 7;

const char* to_string(JobState s) noexcept;
bool is_terminal(JobState s) noexcept;
// CREATED->QUEUED->DISPATCHED->RUNNING->{DONE|FAILED}, QUEUED->CANCELLED.
bool transition_allowed(JobState from, JobState to) noexcept;

enum class ExecMode : std::uint8_t { kFidelity = 0, kLatency = 1 };

const char* to_string(ExecMode m) noexcept;

inline constexpr unsigned kMaxPriority = 7;
inline constexpr std::uint32_t kSubmitLatency = qpx::kDescFlagLatency;

struct DeviceConfig {
  unsigned num_qubits = 16;
  // line | ring | full | edges
  std::string coupling_preset = "line";
  std::vector<transpile::Edge> coupling_edges;
  ExecMode mode = ExecMode::kFidelity;
  bool bypass_transpile = false;
  std::uint64_t seed = 0;
  latency::TimingModel timing = latency::TimingModel::defaults();
  std::uint32_t sq_depth = 64;
  std::uint32_t cq_depth = 64;
  std::size_t host_memory_bytes = 16u << 20;
  std::size_t cache_capacity = 1024;
  std::size_t queue_high_water = 4096;

  // Throws kConfigInvalid.
  transpile::CouplingMap coupling() const;
  void validate() const;

  // Keys mirror the fields above; "coupling" is a preset name or an edge
  // list, "timing" an inline object and "timing_file" a path. Unknown keys
  // are rejected.
  static DeviceConfig from_json(std::string_view text);
  std::string to_json() const;
};

struct DeviceInfo {
  unsigned num_qubits = 0;
  std::uint32_t caps = 0;
  transpile::OpcodeSet native_gates;
  transpile::CouplingMap coupling;
  std::string coupling_preset;
  bool fidelity_mode = false;
  bool latency_mode = false;
  ExecMode active_mode = ExecMode::kFidelity;
  std::uint32_t sq_depth = 0;
  std::uint32_t cq_depth = 0;

  std::string to_json() const;
  std::string to_text() const;
};

struct JobRecord {
  JobId id = 0;
  unsigned priority = 0;
  std::uint64_t seq = 0;
  std::uint32_t shots = 0;
  std::uint32_t flags = 0;
  std::uint64_t payload_len = 0;
  JobState state = JobState::kCreated;
  std::optional<qsim::Histogram> result;
  std::optional<std::uint32_t> error;
  std::uint64_t result_len = 0;
  std::uint64_t exec_time_ns = 0;

  std::chrono::steady_clock::time_point submitted_at;
  std::optional<std::chrono::steady_clock::time_point> dispatched_at;
  std::optional<std::chrono::steady_clock::time_point> completed_at;

  // Model time, from the device timeline.
  std::uint64_t model_submit_ns = 0;
  std::uint64_t model_begin_ns = 0;
  std::uint64_t model_end_ns = 0;
};

struct Transition {
  JobId job = 0;
  JobState from = JobState::kCreated;
  JobState to = JobState::kCreated;
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Counters {
  std::uint64_t submitted = 0;
  std::uint64_t done = 0;
  std::uint64_t failed = 0;
  std::uint64_t cancelled = 0;
  std::uint64_t queued = 0;
  std::uint64_t in_flight = 0;
};

struct QueueEntry {
  JobId job = 0;
  unsigned priority = 0;
  std::uint64_t seq = 0;
};

class SchedulingPolicy {
 public:
  virtual ~SchedulingPolicy() = default;
  virtual void push(const QueueEntry& entry) = 0;
  virtual std::optional<QueueEntry> pop() = 0;
  virtual bool remove(JobId job) = 0;
  virtual std::size_t size() const = 0;
};

// Non-preemptive strict priority (0 first), FIFO by submission sequence
// within a priority level.
class StrictPriorityFifo final : public SchedulingPolicy {
 public:
  void push(const QueueEntry& entry) override;
  std::optional<QueueEntry> pop() override;
  bool remove(JobId job) override;
  std::size_t size() const override { return order_.size(); }

 private:
  using Key = std::tuple<unsigned, std::uint64_t, JobId>;
  std::set<Key> order_;
  std::unordered_map<JobId, Key> index_;
};

class Session {
 public:
  // Throws kConfigInvalid.
  static std::unique_ptr<Session> open(const DeviceConfig& config,
                                       std::unique_ptr<SchedulingPolicy> policy = nullptr);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Validates the header only. Throws kInvalidArgument, kBadHeader or
  // kQueueSaturated.
  JobId submit(std::span<const std::uint8_t> payload, std::uint32_t shots, unsigned priority,
               std::uint32_t flags = 0);
  JobState check(JobId id) const;
  // std::nullopt waits forever. Throws kTimedOut if the job is still live.
  JobState wait(JobId id, std::optional<std::chrono::nanoseconds> timeout = std::nullopt);
  // Throws kNotFinished, or kJobFailed with Error::device_status set.
  qsim::Histogram get_results(JobId id) const;
  // Queue-only; throws kTooLateToCancel once dispatched.
  void cancel(JobId id);
  // Drops a terminal job's record; throws kNotFinished for live jobs.
  void free(JobId id);
  DeviceInfo query() const;

  JobRecord record(JobId id) const;
  std::vector<Transition> transition_log() const;
  Counters counters() const;

  // While paused, submitted jobs stay QUEUED.
  void pause_dispatch();
  void resume_dispatch();
  // Blocks until no job is queued or in flight.
  void wait_quiescent();

  const DeviceConfig& config() const noexcept { return config_; }
  qpx::DeviceRunner& device() noexcept { return *runner_; }
  transpile::CacheStats cache_stats() const { return runner_->cache_stats(); }

 private:
  struct Job {
    JobRecord rec;
    std::vector<std::uint8_t> payload;  // released once copied to host memory
    std::uint64_t payload_addr = 0;
  };

  Session(const DeviceConfig& config, std::unique_ptr<SchedulingPolicy> policy);

  void move_to(Job& job, JobState to);
  Job& find(JobId id);
  const Job& find(JobId id) const;
  void wake(bool interrupt);
  void service_loop();
  void handle_interrupt();
  void complete(const qpx::CompletionRecord& rec, std::optional<qsim::Histogram> result,
                std::optional<qpx::JobTiming> timing);
  void dispatch();
  void promote_head();

  DeviceConfig config_;
  transpile::CouplingMap coupling_;
  std::shared_ptr<qpx::HostMemory> memory_;
  std::unique_ptr<qpx::DeviceRunner> runner_;
  std::uint64_t sq_addr_ = 0;
  std::uint64_t cq_addr_ = 0;

  mutable std::mutex mu_;
  std::condition_variable state_cv_;
  std::unique_ptr<SchedulingPolicy> policy_;
  std::unordered_map<JobId, Job> jobs_;
  std::deque<JobId> in_flight_;
  std::vector<Transition> log_;
  Counters counters_;
  JobId next_id_ = 1;
  std::uint64_t next_seq_ = 0;
  std::uint32_t sq_tail_ = 0;
  std::uint32_t cq_head_ = 0;
  bool paused_ = false;

  std::mutex wake_mu_;
  std::condition_variable wake_cv_;
  bool irq_ = false;
  bool kick_ = false;
  bool stop_ = false;
  std::thread service_;
};

struct WorkloadItem {
  std::vector<std::uint8_t> payload;
  std::uint32_t shots = 1;
  unsigned priority = 0;
};

enum class Format : std::uint8_t { kText = 0, kJson = 1, kCsv = 2 };

const char* to_string(Format f) noexcept;
// Throws kInvalidArgument.
Format format_from_string(std::string_view name);

// Cbit 0 is the rightmost character.
std::string bitstring(std::uint64_t key, unsigned num_cbits);

// Histogram lines are sorted by bitstring. In latency mode the model
// execution time is appended.
std::string render_results(const JobRecord& rec, ExecMode mode, Format f);
std::string render_status(const JobRecord& rec, Format f);
std::string render_device_info(const DeviceInfo& info, Format f);
std::string render_report(const latency::LatencyReport& report, Format f);

// Submits the workload as one batch at the current model time on a
// latency-mode device and reports per-job phases. Throws kWrongMode.
latency::LatencyReport profile_run(Session& session, const std::vector<WorkloadItem>& workload);

}  // namespace qal::core
