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

// Runs the qalctl binary and compares what it prints with direct library
// calls made through the C API.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"
#include "qal/qal.h"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qalctl-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "-" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs qalctl with `args` inside the scratch directory; stderr is merged.
  CliRun qalctl(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" QALCTL_PATH "' " + args + " 2>&1";
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string source(const std::string& rel) { return std::string(QAL_SOURCE_DIR) + "/" + rel; }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

std::string library_results_json(const char* config, const std::string& qalt, std::uint32_t shots) {
  qal_buffer bin{};
  EXPECT_EQ(qal_compile_text(qalt.data(), qalt.size(), &bin), QAL_OK);
  qal_device* dev = nullptr;
  EXPECT_EQ(qal_device_open(config, &dev), QAL_OK);
  qal_job_id id = 0;
  EXPECT_EQ(qal_submit(dev, bin.data, bin.len, shots, 0, 0, &id), QAL_OK);
  qal_job_state st{};
  EXPECT_EQ(qal_wait(dev, id, QAL_WAIT_FOREVER, &st), QAL_OK);
  qal_buffer out{};
  EXPECT_EQ(qal_render_results(dev, id, QAL_FORMAT_JSON, &out), QAL_OK);
  std::string s(reinterpret_cast<char*>(out.data), out.len);
  qal_buffer_free(&out);
  qal_buffer_free(&bin);
  qal_device_close(dev);
  return s;
}

}  // namespace

TEST_F(Cli, CompileDisasmRoundTrip) {
  auto r = qalctl("compile " + source("circuits/bell.qalt") + " -o bell.qalb");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(r.out, "4 instructions, 48 bytes -> bell.qalb\n");
  EXPECT_EQ(slurp(path("bell.qalb")), slurp(std::string(QAL_FIXTURE_DIR) + "/bell.qalb"));
  r = qalctl("disasm bell.qalb -o bell2.qalt");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  r = qalctl("compile bell2.qalt -o bell2.qalb");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(slurp(path("bell2.qalb")), slurp(path("bell.qalb")));
}

TEST_F(Cli, CompileDiagnosticsAndExitCodes) {
  std::ofstream(path("bad.qalt")) << ".qubits 2\nh q0\nfrob q1\n";
  auto r = qalctl("compile bad.qalt");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("bad.qalt:3:1:"), std::string::npos) << r.out;
  EXPECT_EQ(qalctl("compile missing.qalt").exit_code, 2);
  EXPECT_EQ(qalctl("frobnicate").exit_code, 2);
  EXPECT_EQ(qalctl("").exit_code, 2);
  EXPECT_EQ(qalctl("submit " + source("circuits/bell.qalt") + " --priority 9").exit_code, 2);
  EXPECT_EQ(qalctl("--qubits 17 device-info").exit_code, 2);
  std::ofstream(path("junk.qalb")) << "not a circuit";
  EXPECT_EQ(qalctl("disasm junk.qalb").exit_code, 1);
}

TEST_F(Cli, SubmitWaitMatchesLibrary) {
  const auto r = qalctl("--seed 7 --qubits 4 --format json submit " + source("circuits/bell.qalt") +
                        " --shots 500 --wait");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto expected =
      library_results_json(R"({"num_qubits": 4, "seed": 7})", slurp(source("circuits/bell.qalt")), 500);
  EXPECT_EQ(nlohmann::json::parse(r.out), nlohmann::json::parse(expected));
}

TEST_F(Cli, LatencyModeResults) {
  const auto r = qalctl("--mode latency submit " + source("circuits/bell.qalt") + " --shots 100 --wait");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(r.out, "00: 0\n01: 0\nexec_time_ns: 66000\n");
}

TEST_F(Cli, SessionJournalLifecycle) {
  const std::string bell = source("circuits/bell.qalt");
  auto r = qalctl("--session s.json --seed 3 submit " + bell + " --shots 64");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(r.out, "job 1: QUEUED\n");
  r = qalctl("--session s.json submit " + bell + " --shots 64 --priority 2");
  EXPECT_EQ(r.out, "job 2: QUEUED\n");
  r = qalctl("--session s.json cancel 2");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  r = qalctl("--session s.json status 2");
  EXPECT_EQ(r.out, "job 2: CANCELLED (device status 7)\n");
  r = qalctl("--session s.json status 1");
  EXPECT_EQ(r.out, "job 1: DONE\n");
  r = qalctl("--session s.json --format json results 1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto expected = library_results_json(R"({"num_qubits": 16, "seed": 3})", slurp(bell), 64);
  EXPECT_EQ(nlohmann::json::parse(r.out)["counts"], nlohmann::json::parse(expected)["counts"]);
  r = qalctl("--session s.json results 2");
  EXPECT_EQ(r.exit_code, 1);
  r = qalctl("--session s.json cancel 1");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("too late to cancel"), std::string::npos);
  EXPECT_EQ(qalctl("--session s.json status 42").exit_code, 1);
}

TEST_F(Cli, DeviceInfoMatchesLibrary) {
  auto r = qalctl("--qubits 4 --coupling ring --format json device-info");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  qal_device* dev = nullptr;
  ASSERT_EQ(qal_device_open(R"({"num_qubits": 4, "coupling": "ring"})", &dev), QAL_OK);
  qal_buffer buf{};
  ASSERT_EQ(qal_render_device_info(dev, QAL_FORMAT_JSON, &buf), QAL_OK);
  EXPECT_EQ(r.out, std::string(reinterpret_cast<char*>(buf.data), buf.len));
  qal_buffer_free(&buf);
  qal_device_close(dev);
  r = qalctl("--qubits 3 --format csv device-info");
  EXPECT_EQ(r.out, "a,b\n0,1\n1,2\n");
}

TEST_F(Cli, ConfigFileResolvesTimingRelativeToItself) {
  const auto r = qalctl("--config " + source("config/device_latency.json") + " --format json bench " +
                        source("circuits/bell.qalt") + " --count 1 --shots 100");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["records"][0]["end_to_end_ns"], 68170);
}

TEST_F(Cli, BenchIsDeterministic) {
  const std::string cmd = "bench " + source("circuits/bell.qalt") + " --count 100 --shots 100 --out ";
  ASSERT_EQ(qalctl(cmd + "a.json").exit_code, 0);
  ASSERT_EQ(qalctl(cmd + "b.json").exit_code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const auto doc = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_EQ(doc["header"]["job_count"], 100);
  EXPECT_EQ(doc["aggregates"]["queue_wait_ns"]["p50"], 49 * 67920);
  ASSERT_EQ(qalctl(cmd + "a.csv").exit_code, 0);
  EXPECT_EQ(slurp(path("a.csv")).rfind("job_id,queue_wait_ns", 0), 0u);
  const auto empty = qalctl("--format json bench " + source("circuits/bell.qalt") + " --count 0");
  ASSERT_EQ(empty.exit_code, 0) << empty.out;
  EXPECT_FALSE(nlohmann::json::parse(empty.out).contains("aggregates"));
}

TEST_F(Cli, DoublingPerByteCostDoublesTransfer) {
  auto timing = nlohmann::json::parse(slurp(source("config/timing_default.json")));
  timing["t_dma_per_byte"] = 2;
  std::ofstream(path("slow_dma.json")) << timing.dump();
  const std::string cmd = "--format json bench " + source("circuits/bell.qalt") + " --count 5 --shots 100";
  const auto base = nlohmann::json::parse(qalctl(cmd).out);
  const auto slow = nlohmann::json::parse(qalctl("--timing slow_dma.json " + cmd).out);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(slow["records"][i]["transfer_ns"], 2 * base["records"][i]["transfer_ns"].get<int>());
    EXPECT_EQ(slow["records"][i]["exec_ns"], base["records"][i]["exec_ns"]);
  }
}
