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

#include <sstream>

#include "json.hpp"
#include "qal/error.hpp"
#include "qal/qal_core.hpp"

namespace qal::core {

const char* to_string(Format f) noexcept {
  switch (f) {
    case Format::kText: return "text";
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
  }
  return "?";
}

Format format_from_string(std::string_view name) {
  if (name == "text") return Format::kText;
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  fail(ErrorCode::kInvalidArgument, "unknown output format '" + std::string(name) + "'");
}

std::string bitstring(std::uint64_t key, unsigned num_cbits) {
  std::string out(num_cbits, '0');
  for (unsigned b = 0; b < num_cbits; ++b) {
    if ((key >> b) & 1u) out[num_cbits - 1 - b] = '1';
  }
  return out;
}

std::string render_results(const JobRecord& rec, ExecMode mode, Format f) {
  if (!rec.result) fail(ErrorCode::kNotFinished, "job " + std::to_string(rec.id) + " has no result");
  const auto& h = *rec.result;
  // std::map orders keys numerically, which for fixed-width bitstrings is
  // also lexicographic order.
  const bool latency = mode == ExecMode::kLatency;
  std::ostringstream out;
  switch (f) {
    case Format::kText:
      for (const auto& [key, n] : h.counts) out << bitstring(key, h.num_cbits) << ": " << n << "\n";
      if (latency) out << "exec_time_ns: " << rec.exec_time_ns << "\n";
      break;
    case Format::kCsv:
      out << "bitstring,count\n";
      for (const auto& [key, n] : h.counts) out << bitstring(key, h.num_cbits) << "," << n << "\n";
      break;
    case Format::kJson: {
      nlohmann::ordered_json doc;
      doc["job_id"] = rec.id;
      doc["mode"] = to_string(mode);
      doc["shots"] = rec.shots;
      doc["num_cbits"] = h.num_cbits;
      auto counts = nlohmann::ordered_json::object();
      for (const auto& [key, n] : h.counts) counts[bitstring(key, h.num_cbits)] = n;
      doc["counts"] = std::move(counts);
      doc["exec_time_ns"] = rec.exec_time_ns;
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string render_status(const JobRecord& rec, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::kText:
      out << "job " << rec.id << ": " << to_string(rec.state);
      if (rec.error) out << " (device status " << *rec.error << ")";
      out << "\n";
      break;
    case Format::kCsv:
      out << "job_id,state,priority,shots,error\n"
          << rec.id << "," << to_string(rec.state) << "," << rec.priority << "," << rec.shots << ","
          << (rec.error ? std::to_string(*rec.error) : "") << "\n";
      break;
    case Format::kJson: {
      nlohmann::ordered_json doc;
      doc["job_id"] = rec.id;
      doc["state"] = to_string(rec.state);
      doc["priority"] = rec.priority;
      doc["shots"] = rec.shots;
      doc["error"] = rec.error ? nlohmann::ordered_json(*rec.error) : nlohmann::ordered_json(nullptr);
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string render_device_info(const DeviceInfo& info, Format f) {
  switch (f) {
    case Format::kText: return info.to_text();
    case Format::kJson: return info.to_json();
    case Format::kCsv: {
      std::ostringstream out;
      out << "a,b\n";
      for (const auto& [a, b] : info.coupling.edges()) out << a << "," << b << "\n";
      return out.str();
    }
  }
  return {};
}

std::string render_report(const latency::LatencyReport& report, Format f) {
  switch (f) {
    case Format::kText: return report.to_table();
    case Format::kJson: return report.to_json();
    case Format::kCsv: return report.to_csv();
  }
  return {};
}

}  // namespace qal::core
