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
#include "qal/qal_core.hpp"

namespace qal::core {

latency::LatencyReport profile_run(Session& session, const std::vector<WorkloadItem>& workload) {
  if (session.config().mode != ExecMode::kLatency) {
    fail(ErrorCode::kWrongMode, "profiling needs a device opened in latency mode");
  }
  // Start from an idle engine so every job's queue wait is measured against
  // the same model-time origin.
  session.wait_quiescent();
  session.pause_dispatch();
  std::vector<JobId> ids;
  ids.reserve(workload.size());
  try {
    for (const auto& item : workload) ids.push_back(session.submit(item.payload, item.shots, item.priority));
  } catch (...) {
    for (const JobId id : ids) session.cancel(id);
    session.resume_dispatch();
    throw;
  }
  session.resume_dispatch();

  std::vector<latency::JobLatency> jobs;
  jobs.reserve(ids.size());
  for (const JobId id : ids) {
    session.wait(id);
    const JobRecord rec = session.record(id);
    latency::JobTimestamps ts;
    ts.job_id = id;
    ts.submit_ns = rec.model_submit_ns;
    ts.begin_ns = rec.model_begin_ns;
    ts.end_ns = rec.model_end_ns;
    ts.payload_len = rec.payload_len;
    ts.result_len = rec.result_len;
    ts.exec_ns = rec.exec_time_ns;
    jobs.push_back(latency::decompose_latency(session.config().timing, ts));
  }
  return latency::LatencyReport::build(session.config().timing, std::move(jobs));
}

}  // namespace qal::core
