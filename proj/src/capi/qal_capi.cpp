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

#include "qal/qal.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qal/circuit.hpp"
#include "qal/error.hpp"
#include "qal/qal_core.hpp"

struct qal_device {
  std::unique_ptr<qal::core::Session> session;
};

struct qal_report {
  qal::latency::LatencyReport report;
};

namespace {

using qal::Error;
using qal::ErrorCode;
namespace core = qal::core;

static_assert(static_cast<int>(ErrorCode::kInternal) == QAL_ERR_INTERNAL);
static_assert(static_cast<int>(ErrorCode::kBufferTooSmall) == QAL_ERR_BUFFER_TOO_SMALL);
static_assert(static_cast<int>(core::JobState::kCancelled) == QAL_JOB_CANCELLED);
static_assert(static_cast<int>(core::Format::kCsv) == QAL_FORMAT_CSV);
static_assert(core::kMaxPriority == QAL_MAX_PRIORITY);
static_assert(core::kSubmitLatency == QAL_SUBMIT_LATENCY);

thread_local std::string g_last_error;

qal_status record(ErrorCode code, const std::string& what) {
  g_last_error = what;
  return static_cast<qal_status>(code);
}

// Runs `fn`, translating exceptions into status codes. Nothing may escape
// the C boundary.
template <typename Fn>
qal_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QAL_OK;
  } catch (const Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return record(ErrorCode::kInternal, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) qal::fail(ErrorCode::kInvalidArgument, what);
}

core::Session& session_of(qal_device* dev) {
  require(dev != nullptr && dev->session != nullptr, "null device handle");
  return *dev->session;
}

std::span<const std::uint8_t> bytes_of(const uint8_t* data, uint64_t len) {
  require(data != nullptr || len == 0, "null payload");
  return {data, static_cast<std::size_t>(len)};
}

core::Format format_of(qal_format fmt) {
  require(fmt >= QAL_FORMAT_TEXT && fmt <= QAL_FORMAT_CSV, "unknown output format");
  return static_cast<core::Format>(fmt);
}

// Always NUL-terminated so text results can be used as C strings.
void fill(qal_buffer* out, const void* data, std::size_t len) {
  require(out != nullptr, "null output buffer");
  auto* mem = static_cast<uint8_t*>(std::malloc(len + 1));
  if (mem == nullptr) throw std::bad_alloc();
  if (len) std::memcpy(mem, data, len);
  mem[len] = 0;
  out->data = mem;
  out->len = len;
}

void fill_text(qal_buffer* out, const std::string& s) { fill(out, s.data(), s.size()); }

void do_submit(core::Session& s, qal_submit_args& a) {
  require(a.reserved == 0, "reserved field must be zero");
  a.job_id = s.submit(bytes_of(a.payload, a.payload_len), a.shots, a.priority, a.flags);
}

void do_wait(core::Session& s, qal_wait_args& a) {
  std::optional<std::chrono::nanoseconds> timeout;
  if (a.timeout_ns >= 0) {
    timeout = std::chrono::nanoseconds(a.timeout_ns);
  } else {
    require(a.timeout_ns == QAL_WAIT_FOREVER, "timeout must be >= 0 or QAL_WAIT_FOREVER");
  }
  a.state = static_cast<uint32_t>(s.wait(a.job_id, timeout));
}

void do_results(core::Session& s, qal_results_args& a) {
  a.num_entries = 0;
  a.device_status = 0;
  qal::qsim::Histogram h;
  try {
    h = s.get_results(a.job_id);
  } catch (const Error& e) {
    if (e.device_status) a.device_status = *e.device_status;
    throw;
  }
  const auto rec = s.record(a.job_id);
  a.num_cbits = h.num_cbits;
  a.shots = rec.shots;
  a.exec_time_ns = rec.exec_time_ns;
  a.num_entries = h.counts.size();
  if (a.capacity < h.counts.size()) {
    qal::fail(ErrorCode::kBufferTooSmall, "results need " + std::to_string(h.counts.size()) + " entries");
  }
  require(h.counts.empty() || (a.outcomes != nullptr && a.counts != nullptr), "null result arrays");
  std::size_t i = 0;
  for (const auto& [key, n] : h.counts) {
    a.outcomes[i] = key;
    a.counts[i] = n;
    ++i;
  }
}

void do_query(core::Session& s, qal_device_info& out) {
  const auto info = s.query();
  std::memset(&out, 0, sizeof(out));
  out.num_qubits = info.num_qubits;
  out.caps = info.caps;
  for (auto op : info.native_gates) out.native_gates |= uint64_t{1} << static_cast<unsigned>(op);
  out.active_mode = static_cast<uint32_t>(info.active_mode);
  out.sq_depth = info.sq_depth;
  out.cq_depth = info.cq_depth;
  const auto& edges = info.coupling.edges();
  if (edges.size() > QAL_MAX_EDGES) qal::fail(ErrorCode::kInternal, "coupling map exceeds QAL_MAX_EDGES");
  out.num_edges = static_cast<uint32_t>(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out.edges[i].a = edges[i].first;
    out.edges[i].b = edges[i].second;
  }
}

}  // namespace

extern "C" {

qal_status qal_ioctl(qal_device* dev, uint32_t cmd, void* args) {
  return guarded([&] {
    auto& s = session_of(dev);
    require(args != nullptr, "null command arguments");
    switch (cmd) {
      case QAL_CMD_SUBMIT: do_submit(s, *static_cast<qal_submit_args*>(args)); break;
      case QAL_CMD_CHECK: {
        auto& a = *static_cast<qal_check_args*>(args);
        a.state = static_cast<uint32_t>(s.check(a.job_id));
        break;
      }
      case QAL_CMD_WAIT: do_wait(s, *static_cast<qal_wait_args*>(args)); break;
      case QAL_CMD_GET_RESULTS: do_results(s, *static_cast<qal_results_args*>(args)); break;
      case QAL_CMD_CANCEL: s.cancel(static_cast<qal_cancel_args*>(args)->job_id); break;
      case QAL_CMD_QUERY: do_query(s, static_cast<qal_query_args*>(args)->info); break;
      case QAL_CMD_FREE: s.free(static_cast<qal_free_args*>(args)->job_id); break;
      default: qal::fail(ErrorCode::kInvalidArgument, "unknown command " + std::to_string(cmd));
    }
  });
}

qal_status qal_device_open(const char* config_json, qal_device** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    const auto config = config_json ? core::DeviceConfig::from_json(config_json) : core::DeviceConfig{};
    auto dev = std::make_unique<qal_device>();
    dev->session = core::Session::open(config);
    *out = dev.release();
  });
}

void qal_device_close(qal_device* dev) { delete dev; }

qal_status qal_pause_dispatch(qal_device* dev) {
  return guarded([&] { session_of(dev).pause_dispatch(); });
}

qal_status qal_resume_dispatch(qal_device* dev) {
  return guarded([&] { session_of(dev).resume_dispatch(); });
}

qal_status qal_submit(qal_device* dev, const uint8_t* payload, uint64_t len, uint32_t shots, uint32_t priority,
                      uint32_t flags, qal_job_id* out) {
  qal_submit_args a{payload, len, shots, priority, flags, 0, 0};
  const qal_status st = qal_ioctl(dev, QAL_CMD_SUBMIT, &a);
  if (st == QAL_OK && out) *out = a.job_id;
  return st;
}

qal_status qal_check(qal_device* dev, qal_job_id job, qal_job_state* out) {
  qal_check_args a{job, 0, 0};
  const qal_status st = qal_ioctl(dev, QAL_CMD_CHECK, &a);
  if (st == QAL_OK && out) *out = static_cast<qal_job_state>(a.state);
  return st;
}

qal_status qal_wait(qal_device* dev, qal_job_id job, int64_t timeout_ns, qal_job_state* out) {
  qal_wait_args a{job, timeout_ns, 0, 0};
  const qal_status st = qal_ioctl(dev, QAL_CMD_WAIT, &a);
  if (st == QAL_OK && out) *out = static_cast<qal_job_state>(a.state);
  return st;
}

qal_status qal_get_results(qal_device* dev, qal_results_args* args) { return qal_ioctl(dev, QAL_CMD_GET_RESULTS, args); }

qal_status qal_cancel(qal_device* dev, qal_job_id job) {
  qal_cancel_args a{job};
  return qal_ioctl(dev, QAL_CMD_CANCEL, &a);
}

qal_status qal_free_job(qal_device* dev, qal_job_id job) {
  qal_free_args a{job};
  return qal_ioctl(dev, QAL_CMD_FREE, &a);
}

qal_status qal_query(qal_device* dev, qal_device_info* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    do_query(session_of(dev), *out);
  });
}

qal_status qal_compile_text(const char* text, size_t len, qal_buffer* out) {
  return guarded([&] {
    require(text != nullptr || len == 0, "null text");
    const auto circuit = qal::parse_text(std::string_view(text ? text : "", len));
    const auto bytes = qal::encode_binary(circuit);
    fill(out, bytes.data(), bytes.size());
  });
}

qal_status qal_disassemble(const uint8_t* bytes, size_t len, qal_buffer* out) {
  return guarded([&] { fill_text(out, qal::emit_text(qal::decode_binary(bytes_of(bytes, len)))); });
}

qal_status qal_instruction_count(const uint8_t* bytes, size_t len, uint32_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = static_cast<uint32_t>(qal::decode_binary(bytes_of(bytes, len)).instructions.size());
  });
}

qal_status qal_render_device_info(qal_device* dev, qal_format fmt, qal_buffer* out) {
  return guarded([&] { fill_text(out, core::render_device_info(session_of(dev).query(), format_of(fmt))); });
}

qal_status qal_render_status(qal_device* dev, qal_job_id job, qal_format fmt, qal_buffer* out) {
  return guarded([&] { fill_text(out, core::render_status(session_of(dev).record(job), format_of(fmt))); });
}

qal_status qal_render_results(qal_device* dev, qal_job_id job, qal_format fmt, qal_buffer* out) {
  return guarded([&] {
    auto& s = session_of(dev);
    s.get_results(job);  // surfaces NotFinished / JobFailed
    const auto rec = s.record(job);
    const bool latency = s.config().mode == core::ExecMode::kLatency || (rec.flags & QAL_SUBMIT_LATENCY) != 0;
    fill_text(out, core::render_results(rec, latency ? core::ExecMode::kLatency : core::ExecMode::kFidelity, format_of(fmt)));
  });
}

qal_status qal_profile_run(qal_device* dev, const qal_workload_item* items, size_t count, qal_report** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(items != nullptr || count == 0, "null workload");
    *out = nullptr;
    std::vector<core::WorkloadItem> workload(count);
    for (size_t i = 0; i < count; ++i) {
      const auto bytes = bytes_of(items[i].payload, items[i].payload_len);
      workload[i].payload.assign(bytes.begin(), bytes.end());
      workload[i].shots = items[i].shots;
      workload[i].priority = items[i].priority;
    }
    auto report = std::make_unique<qal_report>();
    report->report = core::profile_run(session_of(dev), workload);
    *out = report.release();
  });
}

qal_status qal_report_render(const qal_report* report, qal_format fmt, qal_buffer* out) {
  return guarded([&] {
    require(report != nullptr, "null report");
    fill_text(out, core::render_report(report->report, format_of(fmt)));
  });
}

uint64_t qal_report_job_count(const qal_report* report) { return report ? report->report.jobs.size() : 0; }

void qal_report_free(qal_report* report) { delete report; }

void qal_buffer_free(qal_buffer* buf) {
  if (!buf) return;
  std::free(buf->data);
  buf->data = nullptr;
  buf->len = 0;
}

const char* qal_last_error(void) { return g_last_error.c_str(); }

const char* qal_status_string(qal_status status) { return qal::to_string(static_cast<ErrorCode>(status)); }

const char* qal_job_state_string(qal_job_state state) {
  if (state < QAL_JOB_CREATED || state > QAL_JOB_CANCELLED) return "UNKNOWN";
  return core::to_string(static_cast<core::JobState>(state));
}

const char* qal_version(void) { return "1.0.0"; }

}  // extern "C"
