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

// qalctl: operator tool over libqal.
//
// Every command is a thin shell over the C API. Jobs submitted without
// --wait are recorded in a session journal (default qalctl-session.json);
// later status/results/cancel invocations rebuild the device from that
// journal and replay it. Device seeds make the replay exact.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qal/qal.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(qal_status st) {
  if (st != QAL_OK) throw Failure(std::string(qal_status_string(st)) + ": " + qal_last_error());
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const void* data, size_t len) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure("cannot write '" + path + "'");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!out) throw Failure("write to '" + path + "' failed");
}

// RAII over qal_buffer.
class Buffer {
 public:
  Buffer() = default;
  ~Buffer() { qal_buffer_free(&buf_); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  qal_buffer* get() { return &buf_; }
  const uint8_t* data() const { return buf_.data; }
  size_t size() const { return buf_.len; }
  std::string str() const { return std::string(reinterpret_cast<const char*>(buf_.data), buf_.len); }

 private:
  qal_buffer buf_{nullptr, 0};
};

class Device {
 public:
  explicit Device(const std::string& config_json) { check(qal_device_open(config_json.c_str(), &dev_)); }
  ~Device() { qal_device_close(dev_); }
  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;
  qal_device* get() const { return dev_; }

 private:
  qal_device* dev_ = nullptr;
};

struct Globals {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string format = "text";
  std::string mode;
  std::optional<unsigned> qubits;
  std::string coupling;
  std::string timing_path;
  std::string session_path = "qalctl-session.json";
};

qal_format format_of(const std::string& name) {
  if (name == "json") return QAL_FORMAT_JSON;
  if (name == "csv") return QAL_FORMAT_CSV;
  return QAL_FORMAT_TEXT;
}

std::string absolute(const std::string& path, const fs::path& base) {
  const fs::path p(path);
  return (p.is_absolute() ? p : base / p).lexically_normal().string();
}

// Flags override the config file; relative timing paths in the file are
// taken relative to the file itself.
std::string device_config(const Globals& g, const std::string& forced_mode = {}) {
  ordered_json cfg = ordered_json::object();
  if (!g.config_path.empty()) {
    const auto raw = read_file(g.config_path);
    try {
      cfg = ordered_json::parse(raw.begin(), raw.end());
    } catch (const ordered_json::exception& e) {
      throw Failure("config '" + g.config_path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw Failure("config '" + g.config_path + "' must be a JSON object");
    if (cfg.contains("timing_file") && cfg["timing_file"].is_string()) {
      const auto dir = fs::absolute(g.config_path).parent_path();
      cfg["timing_file"] = absolute(cfg["timing_file"].get<std::string>(), dir);
    }
  }
  if (g.seed) cfg["seed"] = *g.seed;
  if (g.qubits) cfg["num_qubits"] = *g.qubits;
  if (!g.coupling.empty()) cfg["coupling"] = g.coupling;
  if (!g.timing_path.empty()) {
    cfg.erase("timing");
    cfg["timing_file"] = absolute(g.timing_path, fs::current_path());
  }
  if (!g.mode.empty()) cfg["mode"] = g.mode;
  if (!forced_mode.empty()) cfg["mode"] = forced_mode;
  return cfg.dump();
}

bool is_text_circuit(const std::string& path) { return fs::path(path).extension() == ".qalt"; }

// .qalt is compiled through the library; anything else is taken as .qalb.
std::vector<uint8_t> load_payload(const std::string& path) {
  auto bytes = read_file(path);
  if (!is_text_circuit(path)) return bytes;
  Buffer bin;
  check(qal_compile_text(reinterpret_cast<const char*>(bytes.data()), bytes.size(), bin.get()));
  return {bin.data(), bin.data() + bin.size()};
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2) throw Failure("corrupt session journal payload");
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
  return out;
}

// ---- session journal --------------------------------------------------

class Journal {
 public:
  Journal(const Globals& g) : path_(g.session_path) {
    std::error_code ec;
    if (fs::exists(path_, ec)) {
      const auto raw = read_file(path_);
      try {
        doc_ = ordered_json::parse(raw.begin(), raw.end());
      } catch (const ordered_json::exception&) {
        throw Failure("session journal '" + path_ + "' is corrupt");
      }
      if (!doc_.contains("config") || !doc_.contains("ops")) {
        throw Failure("session journal '" + path_ + "' is corrupt");
      }
    } else {
      doc_["config"] = device_config(g);
      doc_["ops"] = ordered_json::array();
    }
  }

  // Rebuilds the device and replays every recorded operation. Dispatch
  // stays paused except inside recorded "run" steps.
  std::unique_ptr<Device> replay() {
    auto dev = std::make_unique<Device>(doc_["config"].get<std::string>());
    check(qal_pause_dispatch(dev->get()));
    ids_.clear();
    for (const auto& op : doc_["ops"]) apply(*dev, op);
    return dev;
  }

  void run(Device& dev) {
    check(qal_resume_dispatch(dev.get()));
    for (qal_job_id id : ids_) check(qal_wait(dev.get(), id, QAL_WAIT_FOREVER, nullptr));
    check(qal_pause_dispatch(dev.get()));
  }

  qal_job_id submit(Device& dev, const std::vector<uint8_t>& payload, uint32_t shots, uint32_t priority) {
    qal_job_id id = 0;
    check(qal_submit(dev.get(), payload.data(), payload.size(), shots, priority, 0, &id));
    ids_.push_back(id);
    doc_["ops"].push_back({{"op", "submit"}, {"payload", to_hex(payload)}, {"shots", shots}, {"priority", priority}});
    return id;
  }

  void record(ordered_json op) { doc_["ops"].push_back(std::move(op)); }

  void save() const {
    const auto text = doc_.dump(2) + "\n";
    write_file(path_, text.data(), text.size());
  }

 private:
  void apply(Device& dev, const ordered_json& op) {
    const auto kind = op.value("op", std::string{});
    if (kind == "submit") {
      const auto payload = from_hex(op.at("payload").get<std::string>());
      qal_job_id id = 0;
      check(qal_submit(dev.get(), payload.data(), payload.size(), op.at("shots").get<uint32_t>(),
                       op.at("priority").get<uint32_t>(), 0, &id));
      ids_.push_back(id);
    } else if (kind == "cancel") {
      check(qal_cancel(dev.get(), op.at("job").get<qal_job_id>()));
    } else if (kind == "run") {
      run(dev);
    } else {
      throw Failure("session journal has unknown op '" + kind + "'");
    }
  }

  std::string path_;
  ordered_json doc_;
  std::vector<qal_job_id> ids_;
};

void print(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

// ---- commands ---------------------------------------------------------

int cmd_compile(const Globals& g, const std::string& input, std::string output) {
  const auto text = read_file(input);
  Buffer bin;
  qal_status st = qal_compile_text(reinterpret_cast<const char*>(text.data()), text.size(), bin.get());
  if (st != QAL_OK) throw Failure(input + ":" + qal_last_error());
  if (output.empty()) output = fs::path(input).replace_extension(".qalb").string();
  write_file(output, bin.data(), bin.size());
  uint32_t count = 0;
  check(qal_instruction_count(bin.data(), bin.size(), &count));
  if (g.format == "json") {
    print(ordered_json{{"output", output}, {"instructions", count}, {"bytes", bin.size()}}.dump(2) + "\n");
  } else if (g.format == "csv") {
    print("output,instructions,bytes\n" + output + "," + std::to_string(count) + "," + std::to_string(bin.size()) +
          "\n");
  } else {
    print(std::to_string(count) + " instructions, " + std::to_string(bin.size()) + " bytes -> " + output + "\n");
  }
  return 0;
}

int cmd_disasm(const std::string& input, const std::string& output) {
  const auto bytes = read_file(input);
  Buffer text;
  check(qal_disassemble(bytes.data(), bytes.size(), text.get()));
  if (output.empty()) {
    print(text.str());
  } else {
    write_file(output, text.data(), text.size());
  }
  return 0;
}

int print_results(Device& dev, qal_job_id id, const Globals& g) {
  Buffer out;
  const qal_status st = qal_render_results(dev.get(), id, format_of(g.format), out.get());
  if (st == QAL_ERR_JOB_FAILED) {
    const std::string why = qal_last_error();
    Buffer status;
    check(qal_render_status(dev.get(), id, format_of(g.format), status.get()));
    print(status.str());
    std::cerr << "qalctl: " << why << "\n";
    return kExitDomain;
  }
  check(st);
  print(out.str());
  return 0;
}

int cmd_submit(const Globals& g, const std::string& file, uint32_t shots, uint32_t priority, bool wait) {
  const auto payload = load_payload(file);
  if (wait) {
    Device dev(device_config(g));
    qal_job_id id = 0;
    check(qal_submit(dev.get(), payload.data(), payload.size(), shots, priority, 0, &id));
    check(qal_wait(dev.get(), id, QAL_WAIT_FOREVER, nullptr));
    return print_results(dev, id, g);
  }
  Journal journal(g);
  auto dev = journal.replay();
  const qal_job_id id = journal.submit(*dev, payload, shots, priority);
  journal.save();
  Buffer out;
  check(qal_render_status(dev->get(), id, format_of(g.format), out.get()));
  print(out.str());
  return 0;
}

// status and results drive the journalled device until every job settles.
int cmd_status(const Globals& g, qal_job_id id, bool results) {
  Journal journal(g);
  auto dev = journal.replay();
  check(qal_check(dev->get(), id, nullptr));
  journal.run(*dev);
  journal.record({{"op", "run"}});
  journal.save();
  if (results) return print_results(*dev, id, g);
  Buffer out;
  check(qal_render_status(dev->get(), id, format_of(g.format), out.get()));
  print(out.str());
  return 0;
}

int cmd_cancel(const Globals& g, qal_job_id id) {
  Journal journal(g);
  auto dev = journal.replay();
  check(qal_cancel(dev->get(), id));
  journal.record({{"op", "cancel"}, {"job", id}});
  journal.save();
  Buffer out;
  check(qal_render_status(dev->get(), id, format_of(g.format), out.get()));
  print(out.str());
  return 0;
}

int cmd_device_info(const Globals& g) {
  Device dev(device_config(g));
  Buffer out;
  check(qal_render_device_info(dev.get(), format_of(g.format), out.get()));
  print(out.str());
  return 0;
}

int cmd_bench(const Globals& g, const std::string& file, uint64_t count, uint32_t shots, const std::string& out_path) {
  const auto payload = load_payload(file);
  Device dev(device_config(g, "latency"));
  std::vector<qal_workload_item> items(count, qal_workload_item{payload.data(), payload.size(), shots, 0});
  qal_report* raw = nullptr;
  check(qal_profile_run(dev.get(), items.data(), items.size(), &raw));
  std::unique_ptr<qal_report, void (*)(qal_report*)> report(raw, qal_report_free);

  if (out_path.empty()) {
    Buffer text;
    check(qal_report_render(report.get(), format_of(g.format), text.get()));
    print(text.str());
    return 0;
  }
  const bool csv = g.format == "csv" || fs::path(out_path).extension() == ".csv";
  Buffer file_out;
  check(qal_report_render(report.get(), csv ? QAL_FORMAT_CSV : QAL_FORMAT_JSON, file_out.get()));
  write_file(out_path, file_out.data(), file_out.size());
  Buffer table;
  check(qal_report_render(report.get(), QAL_FORMAT_TEXT, table.get()));
  print(table.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qalctl - drive a virtual QPX accelerator through libqal"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "Device config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Device RNG seed");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--mode", g.mode, "Execution mode")->check(CLI::IsMember({"fidelity", "latency"}));
  app.add_option("--qubits", g.qubits, "Number of device qubits")->check(CLI::Range(1, 16));
  app.add_option("--coupling", g.coupling, "Coupling preset")->check(CLI::IsMember({"line", "ring", "full"}));
  app.add_option("--timing", g.timing_path, "Timing model file")->check(CLI::ExistingFile);
  app.add_option("--session", g.session_path, "Session journal for queued jobs");

  std::string input, output;
  auto* compile = app.add_subcommand("compile", "Assemble .qalt text into a .qalb binary");
  compile->add_option("input", input, "Circuit text")->required()->check(CLI::ExistingFile);
  compile->add_option("-o,--output", output, "Output path (default: input with .qalb)");

  auto* disasm = app.add_subcommand("disasm", "Print a .qalb binary as canonical text");
  disasm->add_option("input", input, "Circuit binary")->required()->check(CLI::ExistingFile);
  disasm->add_option("-o,--output", output, "Write text here instead of stdout");

  uint32_t shots = 1024;
  uint32_t priority = 0;
  bool wait = false;
  auto* submit = app.add_subcommand("submit", "Submit a circuit (.qalt or .qalb)");
  submit->add_option("file", input, "Circuit file")->required()->check(CLI::ExistingFile);
  submit->add_option("--shots", shots, "Shot count")->check(CLI::Range(1u, 0xFFFFFFFFu));
  submit->add_option("--priority", priority, "0 (highest) .. 7")->check(CLI::Range(0u, QAL_MAX_PRIORITY));
  submit->add_flag("--wait", wait, "Run on a fresh device and print the histogram");

  qal_job_id job = 0;
  auto* status = app.add_subcommand("status", "Show a queued job's state");
  status->add_option("job", job, "Job id")->required();
  auto* results = app.add_subcommand("results", "Print a queued job's histogram");
  results->add_option("job", job, "Job id")->required();
  auto* cancel = app.add_subcommand("cancel", "Cancel a queued job");
  cancel->add_option("job", job, "Job id")->required();

  auto* info = app.add_subcommand("device-info", "Describe the configured device");

  uint64_t count = 1;
  std::string out_path;
  auto* bench = app.add_subcommand("bench", "Latency-mode profile of a repeated workload");
  bench->add_option("file", input, "Circuit file")->required()->check(CLI::ExistingFile);
  bench->add_option("--count", count, "Number of jobs");
  bench->add_option("--shots", shots, "Shots per job")->check(CLI::Range(1u, 0xFFFFFFFFu));
  bench->add_option("--out", out_path, "Report file (.json or .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*compile) return cmd_compile(g, input, output);
    if (*disasm) return cmd_disasm(input, output);
    if (*submit) return cmd_submit(g, input, shots, priority, wait);
    if (*status) return cmd_status(g, job, false);
    if (*results) return cmd_status(g, job, true);
    if (*cancel) return cmd_cancel(g, job);
    if (*info) return cmd_device_info(g);
    if (*bench) return cmd_bench(g, input, count, shots, out_path);
  } catch (const Failure& e) {
    std::cerr << "qalctl: error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "qalctl: error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
