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
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qal/error.hpp"
#include "qal/latency.hpp"

namespace qal::latency {

TimingModel TimingModel::defaults() {
  TimingModel m;
  m.t_mmio_write = 100;
  m.t_mmio_read = 50;
  m.t_dma_setup = 500;
  m.t_dma_per_byte = 1;
  m.t_irq_delivery = 200;
  m.t_gate_1q = 20;
  m.t_gate_2q = 40;
  m.t_measure = 300;
  m.t_reset = 0;
  m.t_shot_overhead = 0;
  return m;
}

const std::vector<std::string_view>& parameter_names() {
  static const std::vector<std::string_view> kNames{
      "t_mmio_write", "t_mmio_read", "t_dma_setup", "t_dma_per_byte", "t_irq_delivery",
      "t_gate_1q",    "t_gate_2q",   "t_measure",   "t_reset",        "t_shot_overhead",
  };
  return kNames;
}

std::uint64_t& parameter(TimingModel& m, std::string_view name) {
  if (name == "t_mmio_write") return m.t_mmio_write;
  if (name == "t_mmio_read") return m.t_mmio_read;
  if (name == "t_dma_setup") return m.t_dma_setup;
  if (name == "t_dma_per_byte") return m.t_dma_per_byte;
  if (name == "t_irq_delivery") return m.t_irq_delivery;
  if (name == "t_gate_1q") return m.t_gate_1q;
  if (name == "t_gate_2q") return m.t_gate_2q;
  if (name == "t_measure") return m.t_measure;
  if (name == "t_reset") return m.t_reset;
  if (name == "t_shot_overhead") return m.t_shot_overhead;
  fail(ErrorCode::kConfigInvalid, "unknown timing parameter '" + std::string(name) + "'");
}

std::uint64_t parameter(const TimingModel& m, std::string_view name) {
  return parameter(const_cast<TimingModel&>(m), name);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

TimingModel from_pairs(const std::map<std::string, std::uint64_t>& pairs) {
  TimingModel m;
  for (const auto& [key, value] : pairs) parameter(m, key) = value;
  for (auto name : parameter_names()) {
    if (!pairs.contains(std::string(name))) {
      fail(ErrorCode::kConfigInvalid, "timing config is missing '" + std::string(name) + "'");
    }
  }
  return m;
}

TimingModel parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kConfigInvalid, std::string("timing config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kConfigInvalid, "timing config must be a JSON object");
  std::map<std::string, std::uint64_t> pairs;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number_unsigned()) {
      fail(ErrorCode::kConfigInvalid, "timing parameter '" + key + "' must be a non-negative integer");
    }
    pairs[key] = value.get<std::uint64_t>();
  }
  return from_pairs(pairs);
}

TimingModel parse_key_values(std::string_view text) {
  std::map<std::string, std::uint64_t> pairs;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kConfigInvalid, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto raw = trim(line.substr(eq + 1));
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size() || raw.empty()) {
      fail(ErrorCode::kConfigInvalid,
           "line " + std::to_string(line_no) + ": '" + key + "' must be a non-negative integer");
    }
    if (pairs.contains(key)) fail(ErrorCode::kConfigInvalid, "duplicate timing parameter '" + key + "'");
    pairs[key] = value;
  }
  return from_pairs(pairs);
}

}  // namespace

TimingModel parse_timing_model(std::string_view text) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_json(body);
  return parse_key_values(text);
}

TimingModel load_timing_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open timing config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_timing_model(buf.str());
}

std::string timing_model_json(const TimingModel& m) {
  nlohmann::ordered_json doc;
  for (auto name : parameter_names()) doc[std::string(name)] = parameter(m, name);
  return doc.dump(2) + "\n";
}

GateCounts count_gates(const Circuit& c) {
  GateCounts n;
  for (const auto& ins : c.instructions) {
    if (ins.opcode == Opcode::kMeasure) {
      ++n.nmeas;
    } else if (ins.opcode == Opcode::kReset) {
      ++n.nreset;
    } else if (is_unitary_gate(ins.opcode)) {
      ++(is_two_qubit(ins.opcode) ? n.n2q : n.n1q);
    }
  }
  return n;
}

std::uint64_t execution_term(const TimingModel& m, const GateCounts& counts, std::uint64_t shots) {
  return shots * (m.t_shot_overhead + counts.n1q * m.t_gate_1q + counts.n2q * m.t_gate_2q +
                  counts.nmeas * m.t_measure + counts.nreset * m.t_reset);
}

std::uint64_t predict_job_latency(const TimingModel& m, std::uint64_t payload_len, std::uint64_t result_len,
                                  const GateCounts& counts, std::uint64_t shots) {
  return m.t_mmio_write + (m.t_dma_setup + payload_len * m.t_dma_per_byte) + execution_term(m, counts, shots) +
         (m.t_dma_setup + result_len * m.t_dma_per_byte) + m.t_irq_delivery;
}

SchedulerConstants SchedulerConstants::from(const TimingModel& m) {
  return SchedulerConstants{m.t_dma_setup + kDescriptorBytes * m.t_dma_per_byte,
                            m.t_mmio_read + 2 * m.t_mmio_write};
}

Interval EngineTimeline::schedule(std::uint64_t arrival_ns, std::uint64_t duration_ns) {
  const std::uint64_t begin = std::max(arrival_ns, clock_);
  clock_ = begin + duration_ns;
  return Interval{begin, clock_};
}

std::vector<Interval> advance_clock(EngineTimeline& timeline, const std::vector<ClockEvent>& events) {
  std::vector<Interval> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(timeline.schedule(e.arrival_ns, e.duration_ns));
  return out;
}

JobLatency decompose_latency(const TimingModel& m, const JobTimestamps& t) {
  const auto constants = SchedulerConstants::from(m);
  JobLatency j;
  j.job_id = t.job_id;
  j.queue_wait_ns = t.begin_ns - t.submit_ns;
  j.transfer_ns = (kDescriptorBytes + t.payload_len + t.result_len) * m.t_dma_per_byte;
  j.exec_ns = t.exec_ns;
  j.end_to_end_ns = t.end_ns + constants.completion_handling_ns - t.submit_ns;
  j.completion_ns = j.end_to_end_ns - j.queue_wait_ns - j.transfer_ns - j.exec_ns;
  return j;
}

std::uint64_t percentile(std::vector<std::uint64_t> values, double p) {
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "percentile of an empty sample");
  std::sort(values.begin(), values.end());
  // p * n first keeps exact products exact (0.29 * 100 is not 29 in binary).
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size()) / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

Aggregate aggregate(const std::vector<std::uint64_t>& values) {
  Aggregate a;
  if (values.empty()) return a;
  a.min = *std::min_element(values.begin(), values.end());
  a.max = *std::max_element(values.begin(), values.end());
  a.p50 = percentile(values, 50);
  a.p90 = percentile(values, 90);
  a.p99 = percentile(values, 99);
  long double sum = 0;
  for (auto v : values) sum += v;
  a.mean = static_cast<double>(sum / values.size());
  return a;
}

LatencyReport LatencyReport::build(const TimingModel& m, std::vector<JobLatency> jobs) {
  LatencyReport r;
  r.model = m;
  r.constants = SchedulerConstants::from(m);
  r.jobs = std::move(jobs);
  if (!r.jobs.empty()) {
    auto column = [&](auto member) {
      std::vector<std::uint64_t> v;
      v.reserve(r.jobs.size());
      for (const auto& j : r.jobs) v.push_back(j.*member);
      return aggregate(v);
    };
    r.aggregates = Aggregates{column(&JobLatency::queue_wait_ns), column(&JobLatency::transfer_ns),
                              column(&JobLatency::exec_ns), column(&JobLatency::completion_ns),
                              column(&JobLatency::end_to_end_ns)};
  }
  return r;
}

namespace {

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
  nlohmann::ordered_json j;
  j["min"] = a.min;
  j["p50"] = a.p50;
  j["p90"] = a.p90;
  j["p99"] = a.p99;
  j["max"] = a.max;
  j["mean"] = a.mean;
  return j;
}

}  // namespace

std::string LatencyReport::to_json() const {
  nlohmann::ordered_json doc;
  auto& header = doc["header"];
  for (auto name : parameter_names()) header["timing_model"][std::string(name)] = parameter(model, name);
  header["scheduler_constants"]["descriptor_fetch_ns"] = constants.descriptor_fetch_ns;
  header["scheduler_constants"]["completion_handling_ns"] = constants.completion_handling_ns;
  header["job_count"] = jobs.size();
  auto& records = doc["records"];
  records = nlohmann::ordered_json::array();
  for (const auto& j : jobs) {
    nlohmann::ordered_json row;
    row["job_id"] = j.job_id;
    row["queue_wait_ns"] = j.queue_wait_ns;
    row["transfer_ns"] = j.transfer_ns;
    row["exec_ns"] = j.exec_ns;
    row["completion_ns"] = j.completion_ns;
    row["end_to_end_ns"] = j.end_to_end_ns;
    records.push_back(std::move(row));
  }
  if (aggregates) {
    auto& agg = doc["aggregates"];
    agg["queue_wait_ns"] = aggregate_json(aggregates->queue_wait);
    agg["transfer_ns"] = aggregate_json(aggregates->transfer);
    agg["exec_ns"] = aggregate_json(aggregates->exec);
    agg["completion_ns"] = aggregate_json(aggregates->completion);
    agg["end_to_end_ns"] = aggregate_json(aggregates->end_to_end);
  }
  return doc.dump(2) + "\n";
}

std::string LatencyReport::to_csv() const {
  std::ostringstream out;
  out << "job_id,queue_wait_ns,transfer_ns,exec_ns,completion_ns,end_to_end_ns\n";
  for (const auto& j : jobs) {
    out << j.job_id << ',' << j.queue_wait_ns << ',' << j.transfer_ns << ',' << j.exec_ns << ',' << j.completion_ns
        << ',' << j.end_to_end_ns << '\n';
  }
  return out.str();
}

std::string LatencyReport::to_table() const {
  std::ostringstream out;
  out << "jobs: " << jobs.size() << "\n";
  out << "descriptor_fetch_ns: " << constants.descriptor_fetch_ns
      << "  completion_handling_ns: " << constants.completion_handling_ns << "\n";
  if (!aggregates) return out.str();
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %12s %12s %12s %12s %12s %14s\n", "phase", "min", "p50", "p90", "p99",
                "max", "mean");
  out << line;
  auto row = [&](const char* name, const Aggregate& a) {
    std::snprintf(line, sizeof(line), "%-14s %12llu %12llu %12llu %12llu %12llu %14.1f\n", name,
                  static_cast<unsigned long long>(a.min), static_cast<unsigned long long>(a.p50),
                  static_cast<unsigned long long>(a.p90), static_cast<unsigned long long>(a.p99),
                  static_cast<unsigned long long>(a.max), a.mean);
    out << line;
  };
  row("queue_wait_ns", aggregates->queue_wait);
  row("transfer_ns", aggregates->transfer);
  row("exec_ns", aggregates->exec);
  row("completion_ns", aggregates->completion);
  row("end_to_end_ns", aggregates->end_to_end);
  return out.str();
}

}  // namespace qal::latency
