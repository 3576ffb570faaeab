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

// Acceptance suite: one PASS/FAIL line per acceptance criterion. Criteria
// that exercise the full stack go through the libqal C API; the rest drive
// the core modules against the independent test oracles.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dense_matrix.hpp"
#include "generators.hpp"
#include "json.hpp"
#include "qal/circuit.hpp"
#include "qal/error.hpp"
#include "qal/host_memory.hpp"
#include "qal/latency.hpp"
#include "qal/qal.h"
#include "qal/qal_core.hpp"
#include "qal/qpx_device.hpp"
#include "qal/qsim.hpp"
#include "qal/transpile.hpp"

namespace fs = std::filesystem;
using qal::Circuit;
using qal::Instruction;
using qal::Opcode;

namespace {

// Thrown by require(); the message becomes the FAIL reason.
struct CheckFailed {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed{what};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> fixture(const std::string& name) {
  const auto s = slurp(std::string(QAL_FIXTURE_DIR) + "/" + name);
  return {s.begin(), s.end()};
}

void ok(qal_status s, const std::string& what) {
  require(s == QAL_OK, what + ": " + qal_status_string(s) + " (" + qal_last_error() + ")");
}

// ---------------------------------------------------------------- C API helpers

struct Device {
  qal_device* dev = nullptr;
  explicit Device(const std::string& config) { ok(qal_device_open(config.c_str(), &dev), "open device"); }
  ~Device() { qal_device_close(dev); }
  operator qal_device*() const { return dev; }
};

std::vector<std::uint8_t> compile_file(const std::string& path) {
  const std::string text = slurp(path);
  qal_buffer buf{};
  ok(qal_compile_text(text.data(), text.size(), &buf), "compile " + path);
  std::vector<std::uint8_t> out(buf.data, buf.data + buf.len);
  qal_buffer_free(&buf);
  return out;
}

struct CResults {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t exec_time_ns = 0;
  std::uint64_t shots = 0;
};

CResults run_job(qal_device* dev, const std::vector<std::uint8_t>& payload, std::uint32_t shots,
                 std::uint32_t flags = 0) {
  qal_job_id id = 0;
  ok(qal_submit(dev, payload.data(), payload.size(), shots, 0, flags, &id), "submit");
  qal_job_state st{};
  ok(qal_wait(dev, id, QAL_WAIT_FOREVER, &st), "wait");
  require(st == QAL_JOB_DONE, std::string("job ended ") + qal_job_state_string(st));
  std::vector<std::uint64_t> outcomes(64), counts(64);
  qal_results_args res{};
  res.job_id = id;
  res.outcomes = outcomes.data();
  res.counts = counts.data();
  res.capacity = outcomes.size();
  ok(qal_get_results(dev, &res), "get_results");
  CResults r;
  for (std::uint64_t i = 0; i < res.num_entries; ++i) r.counts[outcomes[i]] = counts[i];
  r.exec_time_ns = res.exec_time_ns;
  r.shots = res.shots;
  return r;
}

nlohmann::json profile(qal_device* dev, const std::vector<std::uint8_t>& payload, std::size_t count,
                       std::uint32_t shots) {
  std::vector<qal_workload_item> items(count, qal_workload_item{payload.data(), payload.size(), shots, 0});
  qal_report* report = nullptr;
  ok(qal_profile_run(dev, items.data(), items.size(), &report), "profile_run");
  qal_buffer buf{};
  const auto s = qal_report_render(report, QAL_FORMAT_JSON, &buf);
  qal_report_free(report);
  ok(s, "render report");
  auto doc = nlohmann::json::parse(std::string(reinterpret_cast<char*>(buf.data), buf.len));
  qal_buffer_free(&buf);
  return doc;
}

std::string latency_config(const qal::latency::TimingModel& m) {
  nlohmann::json cfg;
  cfg["num_qubits"] = 4;
  cfg["mode"] = "latency";
  cfg["timing"] = nlohmann::json::parse(qal::latency::timing_model_json(m));
  return cfg.dump();
}

int run_command(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string bell_path() { return std::string(QAL_SOURCE_DIR) + "/circuits/bell.qalt"; }

// ---------------------------------------------------------------- criteria

std::string end_to_end_cut_through() {
  const auto payload = compile_file(bell_path());
  Device dev(R"({"num_qubits": 4, "mode": "fidelity", "seed": 2026})");
  const auto r = run_job(dev, payload, 10000);
  std::uint64_t total = 0;
  for (auto [key, n] : r.counts) {
    require(key == 0 || key == 3, "unexpected outcome " + std::to_string(key));
    require(n >= 4700 && n <= 5300, "count " + std::to_string(n) + " for key " + std::to_string(key));
    total += n;
  }
  require(r.counts.size() == 2 && total == 10000, "histogram does not hold 10000 shots over 00/11");
  return "00=" + std::to_string(r.counts.at(0)) + " 11=" + std::to_string(r.counts.at(3));
}

std::string simulator_oracle_equivalence() {
  testgen::Rng rng(0xACCE97);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const unsigned n = 1 + testgen::below(rng, 6);
    const Circuit c = testgen::unitary_circuit(rng, n, testgen::below(rng, 51));
    const double d = oracle::max_abs_diff(qal::qsim::statevector_of(c).amplitudes(), oracle::state(c));
    require(d < 1e-10, "case " + std::to_string(i) + " differs by " + std::to_string(d));
    worst = std::max(worst, d);
  }
  std::ostringstream os;
  os << "100 circuits, max error " << worst;
  return os.str();
}

std::string codec_round_trip() {
  testgen::Rng rng(0xC0DEC2);
  for (int i = 0; i < 1000; ++i) {
    const Circuit c = testgen::any_circuit(rng);
    const auto bytes = qal::encode_binary(c);
    require(qal::decode_binary(bytes) == c, "binary round-trip case " + std::to_string(i));
    require(qal::parse_text(qal::emit_text(c)) == c, "text round-trip case " + std::to_string(i));
  }
  int accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint8_t> bytes;
    if (i % 2 == 0) {
      bytes = qal::encode_binary(testgen::any_circuit(rng, 8));
      bytes[testgen::below(rng, bytes.size())] ^= 1u << testgen::below(rng, 8);
      if (testgen::below(rng, 8) == 0) bytes.resize(testgen::below(rng, bytes.size() + 1));
    } else {
      bytes.resize(testgen::below(rng, 64));
      for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    }
    try {
      const Circuit c = qal::decode_binary(bytes);
      ++accepted;
      require(qal::encode_binary(c) == bytes, "fuzz case " + std::to_string(i) + " re-encodes differently");
    } catch (const qal::Error&) {
    }
  }
  return "1000 round-trips, 10000 fuzz inputs (" + std::to_string(accepted) + " accepted)";
}

std::string transpiler_correctness() {
  using namespace qal::transpile;
  testgen::Rng rng(0x7A46);
  std::uint64_t two_qubit = 0;
  for (int i = 0; i < 100; ++i) {
    const unsigned n = 2 + testgen::below(rng, 3);
    const CouplingMap map = i % 2 ? CouplingMap::ring(n) : CouplingMap::line(n);
    const Circuit c = testgen::unitary_circuit(rng, n, 1 + testgen::below(rng, 30));
    TranspileCache cache;
    const auto t = transpile(c, Target{n, default_native_gates(), map}, cache);
    for (const auto& ins : t.circuit.instructions) {
      if (!qal::is_two_qubit(ins.opcode)) continue;
      ++two_qubit;
      require(map.adjacent(ins.q0, ins.q1), "case " + std::to_string(i) + " uses a non-edge");
    }
    const unsigned w = std::max(c.num_qubits, t.circuit.num_qubits);
    Circuit a = c;
    Circuit b = t.circuit;
    a.num_qubits = b.num_qubits = w;
    const double overlap =
        oracle::unitary_overlap(oracle::layout_permutation(t.layout_out, w) * oracle::unitary(a), oracle::unitary(b));
    require(overlap >= 1 - 1e-6, "case " + std::to_string(i) + " overlap " + std::to_string(overlap));
  }
  return "100 circuits equivalent, " + std::to_string(two_qubit) + " two-qubit gates all on edges";
}

std::string scheduler_properties() {
  using namespace qal::core;
  const JobState all[] = {JobState::kCreated, JobState::kQueued, JobState::kDispatched, JobState::kRunning,
                          JobState::kDone,    JobState::kFailed, JobState::kCancelled};
  const std::set<std::pair<JobState, JobState>> allowed{
      {JobState::kCreated, JobState::kQueued},   {JobState::kQueued, JobState::kDispatched},
      {JobState::kQueued, JobState::kCancelled}, {JobState::kDispatched, JobState::kRunning},
      {JobState::kRunning, JobState::kDone},     {JobState::kRunning, JobState::kFailed}};
  for (auto from : all)
    for (auto to : all)
      require(transition_allowed(from, to) == (allowed.count({from, to}) == 1),
              std::string("transition ") + to_string(from) + "->" + to_string(to));

  DeviceConfig cfg;
  cfg.num_qubits = 5;
  const auto basis = [](std::uint64_t v) {
    Circuit c(5, 5);
    for (unsigned q = 0; q < 5; ++q)
      if (v >> q & 1) c.add(Instruction::gate(Opcode::kX, q));
    for (unsigned q = 0; q < 5; ++q) c.add(Instruction::measure(q, q));
    return qal::encode_binary(c);
  };

  // Priority dominance and FIFO, repeated to show determinism.
  for (int round = 0; round < 5; ++round) {
    auto s = Session::open(cfg);
    s->pause_dispatch();
    std::vector<std::pair<unsigned, JobId>> expected;
    for (unsigned i = 0; i < 24; ++i) {
      const unsigned p = (i * 5 + round) % 8;
      expected.emplace_back(p, s->submit(basis(i % 32), 4, p));
    }
    std::stable_sort(expected.begin(), expected.end(), [](auto& a, auto& b) { return a.first < b.first; });
    s->resume_dispatch();
    s->wait_quiescent();
    std::vector<JobId> order;
    for (const auto& t : s->transition_log())
      if (t.to == JobState::kDispatched) order.push_back(t.job);
    for (std::size_t i = 0; i < expected.size(); ++i)
      require(order.at(i) == expected[i].second, "dispatch order differs at position " + std::to_string(i));
  }

  // 8 clients x 32 jobs on one session.
  cfg.sq_depth = 8;
  cfg.cq_depth = 4;
  auto s = Session::open(cfg);
  std::vector<std::vector<std::pair<JobId, std::uint64_t>>> mine(8);
  std::vector<std::thread> clients;
  for (int t = 0; t < 8; ++t)
    clients.emplace_back([&, t] {
      for (int j = 0; j < 32; ++j) {
        const std::uint64_t v = (t * 7 + j) % 32;
        mine[t].emplace_back(s->submit(basis(v), 8, (t + j) % 8), v);
      }
    });
  for (auto& c : clients) c.join();
  s->wait_quiescent();
  std::set<JobId> ids;
  for (const auto& per_client : mine)
    for (auto [id, v] : per_client) {
      ids.insert(id);
      const auto h = s->get_results(id);
      require(h.counts.size() == 1 && h.count(v) == 8, "cross-talk in job " + std::to_string(id));
    }
  const auto c = s->counters();
  require(ids.size() == 256 && c.submitted == 256, "job ids not unique");
  require(c.done + c.failed + c.cancelled == c.submitted && c.queued + c.in_flight == 0, "job counts not conserved");
  std::map<JobId, JobState> last;
  for (const auto& t : s->transition_log()) {
    const auto from = last.count(t.job) ? last[t.job] : JobState::kCreated;
    require(t.from == from && transition_allowed(t.from, t.to), "illegal logged transition");
    last[t.job] = t.to;
  }
  return "49 transitions checked, 5 ordering rounds, 256 stress jobs conserved";
}

std::string device_protocol() {
  using namespace qal::qpx;
  const std::uint32_t offsets[] = {0x00, 0x04, 0x08, 0x0C, 0x10, 0x14, 0x18, 0x1C, 0x20,
                                   0x24, 0x28, 0x2C, 0x30, 0x34, 0x38, 0x3C, 0xFC};
  const auto snapshot = [&](const QpxDevice& d) {
    std::vector<std::uint8_t> out;
    for (auto off : offsets)
      for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(d.mmio_read(off) >> (8 * i)));
    return out;
  };

  require(snapshot(QpxDevice(DeviceModelConfig{}, std::make_shared<HostMemory>(4096))) ==
              fixture("registers_poweron.bin"),
          "power-on register map");

  qal::transpile::Target t4;
  t4.num_qubits = 4;
  t4.coupling = qal::transpile::CouplingMap::line(4);
  auto mem = std::make_shared<HostMemory>(1 << 20);
  QpxDevice dev(DeviceModelConfig{t4}, mem);
  const auto sq = *mem->allocate(8 * kRecordSize);
  const auto cq = *mem->allocate(8 * kRecordSize);
  mem->write(cq, std::vector<std::uint8_t>(8 * kRecordSize, 0));
  dev.mmio_write(reg::kSqBaseLo, static_cast<std::uint32_t>(sq));
  dev.mmio_write(reg::kSqBaseHi, static_cast<std::uint32_t>(sq >> 32));
  dev.mmio_write(reg::kSqLen, 8);
  dev.mmio_write(reg::kCqBaseLo, static_cast<std::uint32_t>(cq));
  dev.mmio_write(reg::kCqBaseHi, static_cast<std::uint32_t>(cq >> 32));
  dev.mmio_write(reg::kCqLen, 8);
  dev.mmio_write(reg::kIrqMask, kIrqCompletion);
  dev.mmio_write(reg::kCtrl, kCtrlEnable | kCtrlLatencyMode);
  require(snapshot(dev) == fixture("registers_configured.bin"), "configured register map");

  require(SubmissionDescriptor{0x0102030405060708, HostMemory::kBaseAddress + 0x40, 48, 100, kDescFlagLatency, 0}
                  .encode() == fixture("descriptor.bin"),
          "descriptor layout");
  require(CompletionRecord{7, 0, 40, HostMemory::kBaseAddress + 0x1000, 66000}.encode() == fixture("completion.bin"),
          "completion layout");
  require(CompletionRecord{8, 4, 0, 0, 0}.encode() == fixture("completion_error.bin"), "error completion layout");
  require(encode_result(qal::qsim::Histogram{2, {{0, 5012}, {3, 4988}}}) == fixture("result_bell.bin"),
          "result layout");
  require(encode_result(latency_placeholder(2)) == fixture("result_latency_bell.bin"), "latency placeholder layout");
  require(qal::encode_binary(qal::decode_binary(fixture("bell.qalb"))) == fixture("bell.qalb"), "payload layout");

  // Malformed payload followed by a valid job, in fidelity mode.
  dev.mmio_write(reg::kCtrl, kCtrlEnable);
  std::uint32_t tail = 0;
  const auto post = [&](std::uint64_t id, std::vector<std::uint8_t> payload) {
    const auto addr = *mem->allocate(payload.size());
    mem->write(addr, payload);
    mem->write(sq + tail * kRecordSize,
               SubmissionDescriptor{id, addr, static_cast<std::uint32_t>(payload.size()), 100, 0, 0}.encode());
    tail = (tail + 1) % 8;
    dev.mmio_write(reg::kDoorbell, tail);
  };
  auto bad = fixture("bell.qalb");
  bad[16] = 0x7E;
  post(1, bad);
  post(2, fixture("bell.qalb"));
  const auto first = CompletionRecord::decode(*mem->read(cq, kRecordSize));
  const auto second = CompletionRecord::decode(*mem->read(cq + kRecordSize, kRecordSize));
  require(first.job_id == 1 && first.status == static_cast<std::uint32_t>(DeviceStatus::kBadOpcode),
          "malformed payload not reported as BAD_OPCODE");
  require(second.job_id == 2 && second.status == 0, "valid job after malformed payload failed");
  const auto h = decode_result(*mem->read(second.result_addr, second.result_len));
  require(h.total() == 100 && h.count(1) + h.count(2) == 0, "valid job histogram wrong");

  // Reset returns every register to its power-on value.
  dev.mmio_write(reg::kCtrl, kCtrlReset);
  QpxDevice fresh(DeviceModelConfig{t4}, std::make_shared<HostMemory>(4096));
  require(snapshot(dev) == snapshot(fresh), "reset state differs from power-on");
  return "9 golden fixtures, reset equivalence, malformed-then-valid";
}

std::string latency_determinism() {
  namespace lat = qal::latency;
  const auto m = lat::load_timing_model(std::string(QAL_SOURCE_DIR) + "/config/timing_default.json");
  const lat::GateCounts bell_counts{1, 1, 2, 0};
  require(lat::predict_job_latency(m, 48, 36, bell_counts, 100) == 67384, "formula value for 36-byte result");
  const auto k = lat::SchedulerConstants::from(m);

  const auto payload = compile_file(bell_path());
  Device dev(latency_config(m));
  const auto doc = profile(dev, payload, 1, 100);
  const std::uint64_t e2e = doc["records"][0]["end_to_end_ns"];
  // The result region carries one entry per classical bit: 8 + 2*16 = 40 bytes.
  const std::uint64_t service = lat::predict_job_latency(m, 48, 40, bell_counts, 100);
  require(service == 67384 + 4, "service time for the 40-byte result");
  require(e2e == service + k.descriptor_fetch_ns + k.completion_handling_ns,
          "end_to_end " + std::to_string(e2e) + " != service + scheduler constants");

  // Byte-identical bench reports from two CLI runs.
  const fs::path dir = fs::temp_directory_path() / ("qal-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string bench =
      std::string("'") + QALCTL_PATH + "' bench '" + bell_path() + "' --count 100 --shots 100 --out '";
  require(run_command(bench + (dir / "a.json").string() + "'") == 0, "qalctl bench run 1 failed");
  require(run_command(bench + (dir / "b.json").string() + "'") == 0, "qalctl bench run 2 failed");
  const auto a = slurp((dir / "a.json").string());
  const auto b = slurp((dir / "b.json").string());
  fs::remove_all(dir);
  require(!a.empty() && a == b, "bench reports differ between runs");

  // Doubling the per-byte DMA cost doubles the transfer term only.
  auto slow = m;
  slow.t_dma_per_byte *= 2;
  Device slow_dev(latency_config(slow));
  const auto base_doc = profile(dev, payload, 3, 100);
  const auto slow_doc = profile(slow_dev, payload, 3, 100);
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t t0 = base_doc["records"][i]["transfer_ns"];
    const std::uint64_t t1 = slow_doc["records"][i]["transfer_ns"];
    require(t1 == 2 * t0, "transfer did not double");
    require(slow_doc["records"][i]["exec_ns"] == base_doc["records"][i]["exec_ns"], "exec changed with DMA cost");
  }
  return "formula 67384 ns (36 B result); measured end_to_end " + std::to_string(e2e) + " = " +
         std::to_string(service) + " (40 B result) + " + std::to_string(k.descriptor_fetch_ns) + " + " +
         std::to_string(k.completion_handling_ns) + "; bench byte-identical; transfer doubles";
}

std::string mode_contract() {
  const auto payload = compile_file(bell_path());
  Device fidelity(R"({"num_qubits": 4, "seed": 5})");
  const auto f = run_job(fidelity, payload, 1000);
  require(f.shots == 1000, "fidelity shot count");
  std::uint64_t total = 0;
  for (auto [key, n] : f.counts) {
    require(key == 0 || key == 3, "fidelity outcome " + std::to_string(key));
    total += n;
  }
  require(total == 1000 && f.counts.at(0) > 350 && f.counts.at(3) > 350, "fidelity histogram not a Bell distribution");

  const std::uint64_t expected_exec = 1000u * (20 + 40 + 2 * 300);
  Device latency(R"({"num_qubits": 4, "mode": "latency"})");
  const auto l = run_job(latency, payload, 1000);
  const auto flagged = run_job(fidelity, payload, 1000, QAL_SUBMIT_LATENCY);
  for (const auto* r : {&l, &flagged}) {
    require(r->counts.size() == 2 && r->counts.count(0) && r->counts.count(1), "latency histogram keys");
    for (auto [key, n] : r->counts) require(n == 0, "latency histogram count is nonzero");
    require(r->exec_time_ns == expected_exec, "latency exec_time_ns " + std::to_string(r->exec_time_ns));
  }
  require(f.exec_time_ns == expected_exec, "fidelity exec_time_ns");
  return "fidelity 00=" + std::to_string(f.counts.at(0)) + " 11=" + std::to_string(f.counts.at(3)) +
         "; latency all-zero, exec_time_ns " + std::to_string(l.exec_time_ns);
}

struct Criterion {
  int number;
  const char* title;
  double budget_s;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "end-to-end cut-through", 5, end_to_end_cut_through},
      {2, "simulator oracle equivalence", 60, simulator_oracle_equivalence},
      {3, "codec round-trip", 30, codec_round_trip},
      {4, "transpiler correctness", 60, transpiler_correctness},
      {5, "scheduler properties", 30, scheduler_properties},
      {6, "device protocol", 30, device_protocol},
      {7, "latency mode determinism", 30, latency_determinism},
      {8, "fidelity/latency mode contract", 30, mode_contract},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool passed = true;
    try {
      detail = c.run();
    } catch (const CheckFailed& e) {
      passed = false;
      detail = e.what;
    } catch (const std::exception& e) {
      passed = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (passed && secs > c.budget_s) {
      passed = false;
      detail += " (over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget)";
    }
    failures += passed ? 0 : 1;
    std::printf("%s criterion %d: %s [%.2f s] - %s\n", passed ? "PASS" : "FAIL", c.number, c.title, secs,
                detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
