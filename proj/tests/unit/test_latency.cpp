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

#include <gtest/gtest.h>

#include "json.hpp"
#include "qal/circuit.hpp"
#include "qal/error.hpp"
#include "qal/latency.hpp"
#include "test_util.hpp"

using namespace qal::latency;
using qal::Circuit;
using qal::ErrorCode;
using qal::Instruction;
using qal::Opcode;
using testutil::error_of;

namespace {

const GateCounts kBellCounts{1, 1, 2, 0};

Circuit bell() {
  return Circuit(2, 2,
                 {Instruction::gate(Opcode::kH, 0), Instruction::two_qubit(Opcode::kCnot, 0, 1),
                  Instruction::measure(0, 0), Instruction::measure(1, 1)});
}

}  // namespace

TEST(Predict, AllZeroModelIsZero) {
  EXPECT_EQ(predict_job_latency(TimingModel{}, 48, 36, kBellCounts, 100), 0u);
  EXPECT_EQ(predict_job_latency(TimingModel{}, 1 << 20, 1 << 10, {5, 6, 7, 8}, 1000), 0u);
}

TEST(Predict, BellWorkedExample) {
  // 100 + (500+48) + 100*(20+40+600) + (500+36) + 200, computed by hand.
  EXPECT_EQ(predict_job_latency(TimingModel::defaults(), 48, 36, kBellCounts, 100), 67384u);
  EXPECT_EQ(count_gates(bell()), kBellCounts);
  EXPECT_EQ(qal::encode_binary(bell()).size(), 48u);
}

TEST(Predict, DoublingShotsDoublesOnlyExecution) {
  const auto m = TimingModel::defaults();
  const auto one = predict_job_latency(m, 48, 40, kBellCounts, 100);
  const auto two = predict_job_latency(m, 48, 40, kBellCounts, 200);
  EXPECT_EQ(two - one, execution_term(m, kBellCounts, 100));
  EXPECT_EQ(execution_term(m, kBellCounts, 200), 2 * execution_term(m, kBellCounts, 100));
}

TEST(Predict, EveryParameterContributes) {
  const GateCounts counts{3, 2, 1, 1};
  const TimingModel zero{};
  for (auto name : parameter_names()) {
    TimingModel m{};
    parameter(m, name) = 1;
    if (name == "t_mmio_read") {
      // Register reads only enter through host completion handling.
      EXPECT_EQ(predict_job_latency(m, 10, 10, counts, 2), 0u);
      EXPECT_EQ(SchedulerConstants::from(m).completion_handling_ns, 1u);
      continue;
    }
    EXPECT_GT(predict_job_latency(m, 10, 10, counts, 2), predict_job_latency(zero, 10, 10, counts, 2)) << name;
  }
}

TEST(Predict, CountGatesIgnoresBarrierAndNop) {
  const Circuit c(2, 1,
                  {Instruction{}, Instruction::gate(Opcode::kBarrier, 0), Instruction::gate(Opcode::kReset, 1),
                   Instruction::two_qubit(Opcode::kSwap, 0, 1), Instruction::rotation(Opcode::kRy, 0, 1.0f),
                   Instruction::measure(0, 0)});
  EXPECT_EQ(count_gates(c), (GateCounts{1, 1, 1, 1}));
}

TEST(Scheduler, DeclaredConstants) {
  const auto k = SchedulerConstants::from(TimingModel::defaults());
  EXPECT_EQ(k.descriptor_fetch_ns, 500u + 32u);
  EXPECT_EQ(k.completion_handling_ns, 50u + 2 * 100u);
}

TEST(Timeline, SecondJobWaitsForFirst) {
  EngineTimeline t;
  const auto spans = advance_clock(t, {{0, 1000}, {0, 1000}});
  EXPECT_EQ(spans[0], (Interval{0, 1000}));
  EXPECT_EQ(spans[1], (Interval{1000, 2000}));
}

TEST(Timeline, EmptyEventsLeaveClock) {
  EngineTimeline t;
  t.schedule(0, 250);
  EXPECT_TRUE(advance_clock(t, {}).empty());
  EXPECT_EQ(t.now(), 250u);
}

TEST(Timeline, IdleGapsAndHandSummedSchedule) {
  EngineTimeline t;
  // Hand-computed: [10,110] [110,160] idle until 500, [500,800] [800,801].
  const auto spans = advance_clock(t, {{10, 100}, {20, 50}, {500, 300}, {600, 1}});
  EXPECT_EQ(spans, (std::vector<Interval>{{10, 110}, {110, 160}, {500, 800}, {800, 801}}));
  EXPECT_EQ(t.now(), 801u);
  for (std::size_t i = 1; i < spans.size(); ++i) EXPECT_LE(spans[i - 1].end, spans[i].begin);
}

TEST(Decompose, PhasesAddUp) {
  const auto m = TimingModel::defaults();
  const auto k = SchedulerConstants::from(m);
  const std::uint64_t service = k.descriptor_fetch_ns + predict_job_latency(m, 48, 40, kBellCounts, 100);
  JobTimestamps ts{7, 1000, 5000, 5000 + service, 48, 40, execution_term(m, kBellCounts, 100)};
  const auto j = decompose_latency(m, ts);
  EXPECT_EQ(j.job_id, 7u);
  EXPECT_EQ(j.queue_wait_ns, 4000u);
  EXPECT_EQ(j.transfer_ns, 32u + 48u + 40u);
  EXPECT_EQ(j.exec_ns, 66000u);
  EXPECT_EQ(j.end_to_end_ns, 4000u + service + k.completion_handling_ns);
  EXPECT_EQ(j.queue_wait_ns + j.transfer_ns + j.exec_ns + j.completion_ns, j.end_to_end_ns);
  // Fixed costs: one MMIO write, three DMA setups, one IRQ, host handling.
  EXPECT_EQ(j.completion_ns, 100u + 3 * 500u + 200u + 250u);
}

TEST(Decompose, DoublingPerByteDoublesTransfer) {
  auto m = TimingModel::defaults();
  JobTimestamps ts{1, 0, 0, 0, 48, 40, 0};
  const auto base = decompose_latency(m, ts).transfer_ns;
  m.t_dma_per_byte *= 2;
  EXPECT_EQ(decompose_latency(m, ts).transfer_ns, 2 * base);
}

TEST(Percentile, NearestRank) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t i = 1; i <= 100; ++i) v.push_back(101 - i);
  EXPECT_EQ(percentile(v, 50), 50u);
  EXPECT_EQ(percentile(v, 90), 90u);
  EXPECT_EQ(percentile(v, 99), 99u);
  EXPECT_EQ(percentile({7}, 50), 7u);
  EXPECT_EQ(percentile({1, 2, 3, 4}, 50), 2u);
  EXPECT_EQ(percentile({1, 2, 3, 4}, 51), 3u);
  EXPECT_EQ(error_of([] { percentile({}, 50); }).code(), ErrorCode::kInvalidArgument);
}

TEST(Percentile, Aggregate) {
  const auto a = aggregate({4, 1, 3, 2});
  EXPECT_EQ(a.min, 1u);
  EXPECT_EQ(a.max, 4u);
  EXPECT_EQ(a.p50, 2u);
  EXPECT_EQ(a.p99, 4u);
  EXPECT_DOUBLE_EQ(a.mean, 2.5);
}

TEST(TimingConfig, JsonAndKeyValueAgree) {
  const std::string json = testutil::read_text(std::string(QAL_SOURCE_DIR) + "/config/timing_default.json");
  EXPECT_EQ(parse_timing_model(json), TimingModel::defaults());
  const std::string kv =
      "# placeholder values\n t_mmio_write = 100\nt_mmio_read=50\nt_dma_setup = 500\nt_dma_per_byte = 1\n"
      "t_irq_delivery = 200\nt_gate_1q = 20\nt_gate_2q = 40\nt_measure = 300\nt_reset = 0\nt_shot_overhead = 0\n";
  EXPECT_EQ(parse_timing_model(kv), TimingModel::defaults());
  EXPECT_EQ(parse_timing_model(timing_model_json(TimingModel::defaults())), TimingModel::defaults());
}

TEST(TimingConfig, Rejections) {
  auto doc = nlohmann::json::parse(timing_model_json(TimingModel::defaults()));
  auto with = [&](auto edit) {
    auto d = doc;
    edit(d);
    return error_of([&] { parse_timing_model(d.dump()); }).code();
  };
  EXPECT_EQ(with([](auto& d) { d["t_bogus"] = 1; }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(with([](auto& d) { d.erase("t_reset"); }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(with([](auto& d) { d["t_reset"] = -1; }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(with([](auto& d) { d["t_reset"] = 1.5; }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(with([](auto& d) { d["t_reset"] = "1"; }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(error_of([] { parse_timing_model("t_mmio_write 100\n"); }).code(), ErrorCode::kConfigInvalid);
  EXPECT_EQ(error_of([] { parse_timing_model("t_mmio_write = 1\nt_mmio_write = 2\n"); }).code(),
            ErrorCode::kConfigInvalid);
  EXPECT_EQ(error_of([] { load_timing_model("/nonexistent/timing.json"); }).code(), ErrorCode::kIo);
}

TEST(Report, EmptyWorkloadHasNoAggregates) {
  const auto r = LatencyReport::build(TimingModel::defaults(), {});
  EXPECT_FALSE(r.aggregates.has_value());
  const auto doc = nlohmann::json::parse(r.to_json());
  EXPECT_FALSE(doc.contains("aggregates"));
  EXPECT_EQ(doc["header"]["job_count"], 0);
  EXPECT_EQ(doc["header"]["scheduler_constants"]["descriptor_fetch_ns"], 532);
  EXPECT_EQ(r.to_csv(), "job_id,queue_wait_ns,transfer_ns,exec_ns,completion_ns,end_to_end_ns\n");
}

TEST(Report, SerializationIsDeterministic) {
  std::vector<JobLatency> jobs{{1, 0, 120, 66000, 2050, 68170}, {2, 67920, 120, 66000, 2050, 136090}};
  const auto a = LatencyReport::build(TimingModel::defaults(), jobs);
  const auto b = LatencyReport::build(TimingModel::defaults(), jobs);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.to_csv(), "job_id,queue_wait_ns,transfer_ns,exec_ns,completion_ns,end_to_end_ns\n"
                        "1,0,120,66000,2050,68170\n2,67920,120,66000,2050,136090\n");
  const auto doc = nlohmann::json::parse(a.to_json());
  EXPECT_EQ(doc["records"].size(), 2u);
  EXPECT_EQ(doc["aggregates"]["end_to_end_ns"]["max"], 136090);
  EXPECT_NE(a.to_table().find("end_to_end_ns"), std::string::npos);
}
