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

// Discrete-event timing model behind Latency Mode. All quantities are
// integer nanoseconds of model time; nothing here reads a wall clock.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qal/circuit.hpp"

namespace qal::latency {

struct TimingModel {
  std::uint64_t t_mmio_write = 0;
  std::uint64_t t_mmio_read = 0;
  std::uint64_t t_dma_setup = 0;
  std::uint64_t t_dma_per_byte = 0;
  std::uint64_t t_irq_delivery = 0;
  std::uint64_t t_gate_1q = 0;
  std::uint64_t t_gate_2q = 0;
  std::uint64_t t_measure = 0;
  std::uint64_t t_reset = 0;
  std::uint64_t t_shot_overhead = 0;

  // Placeholder values shipped in config/timing_default.json. Not measured.
  static TimingModel defaults();

  friend bool operator==(const TimingModel&, const TimingModel&) = default;
};

// Parameter names in declaration order, as used by the config file.
const std::vector<std::string_view>& parameter_names();
std::uint64_t& parameter(TimingModel& m, std::string_view name);
std::uint64_t parameter(const TimingModel& m, std::string_view name);

// Accepts a JSON object or `key = value` lines (# comments). All ten keys are
// required; unknown keys and negative or non-integer values are rejected
// with kConfigInvalid.
TimingModel parse_timing_model(std::string_view text);
TimingModel load_timing_model(const std::string& path);
std::string timing_model_json(const TimingModel& m);

struct GateCounts {
  std::uint64_t n1q = 0;
  std::uint64_t n2q = 0;
  std::uint64_t nmeas = 0;
  std::uint64_t nreset = 0;

  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

// NOP and BARRIER cost nothing.
GateCounts count_gates(const Circuit& c);

inline constexpr std::uint64_t kDescriptorBytes = 32;

std::uint64_t execution_term(const TimingModel& m, const GateCounts& counts, std::uint64_t shots);

// doorbell + payload DMA + execution + result DMA + interrupt.
std::uint64_t predict_job_latency(const TimingModel& m, std::uint64_t payload_len, std::uint64_t result_len,
                                  const GateCounts& counts, std::uint64_t shots);

// Fixed per-job costs outside the per-job latency prediction, declared in reports.
struct SchedulerConstants {
  // Device fetches the 32-byte descriptor before each job.
  std::uint64_t descriptor_fetch_ns = 0;
  // Host reads IRQ_STATUS, clears it, and writes CQ_HEAD.
  std::uint64_t completion_handling_ns = 0;

  static SchedulerConstants from(const TimingModel& m);
};

struct Interval {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Single in-order engine: intervals never overlap and the clock never moves
// backwards. A job starts at max(arrival, end of the previous job).
class EngineTimeline {
 public:
  Interval schedule(std::uint64_t arrival_ns, std::uint64_t duration_ns);
  std::uint64_t now() const noexcept { return clock_; }
  void reset() noexcept { clock_ = 0; }

 private:
  std::uint64_t clock_ = 0;
};

struct ClockEvent {
  std::uint64_t arrival_ns = 0;
  std::uint64_t duration_ns = 0;
};

// Schedules each event in order; returns one interval per event.
std::vector<Interval> advance_clock(EngineTimeline& timeline, const std::vector<ClockEvent>& events);

struct JobLatency {
  std::uint64_t job_id = 0;
  std::uint64_t queue_wait_ns = 0;
  std::uint64_t transfer_ns = 0;
  std::uint64_t exec_ns = 0;
  std::uint64_t completion_ns = 0;
  std::uint64_t end_to_end_ns = 0;

  friend bool operator==(const JobLatency&, const JobLatency&) = default;
};

struct JobTimestamps {
  std::uint64_t job_id = 0;
  std::uint64_t submit_ns = 0;
  std::uint64_t begin_ns = 0;  // device starts fetching the descriptor
  std::uint64_t end_ns = 0;    // interrupt delivered
  std::uint64_t payload_len = 0;
  std::uint64_t result_len = 0;
  std::uint64_t exec_ns = 0;
};

// Splits one job's model-time history into the four reported phases. Byte
// movement goes to transfer, fixed command and notification costs to
// completion.
JobLatency decompose_latency(const TimingModel& m, const JobTimestamps& t);

struct Aggregate {
  std::uint64_t min = 0;
  std::uint64_t p50 = 0;
  std::uint64_t p90 = 0;
  std::uint64_t p99 = 0;
  std::uint64_t max = 0;
  double mean = 0.0;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

// Nearest-rank percentile over an unsorted sample (p in (0, 100]).
std::uint64_t percentile(std::vector<std::uint64_t> values, double p);
Aggregate aggregate(const std::vector<std::uint64_t>& values);

struct LatencyReport {
  TimingModel model;
  SchedulerConstants constants;
  std::vector<JobLatency> jobs;

  struct Aggregates {
    Aggregate queue_wait;
    Aggregate transfer;
    Aggregate exec;
    Aggregate completion;
    Aggregate end_to_end;
  };
  // Absent for an empty workload.
  std::optional<Aggregates> aggregates;

  static LatencyReport build(const TimingModel& m, std::vector<JobLatency> jobs);

  std::string to_json() const;
  std::string to_csv() const;
  std::string to_table() const;
};

}  // namespace qal::latency
