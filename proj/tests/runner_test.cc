// Copyright 2026 The xylosim Authors
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

#include "xylosim/runner.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "temp_dir.h"
#include "xylosim/errors.h"
#include "xylosim/formats.h"
#include "xylosim/wav.h"

namespace xylosim::runner {
namespace {

TEST(Manifest, ParsesEntriesInOrder) {
  const Manifest m = parse_manifest(
      "path,label,split\n"
      "a.wav,0,train\n"
      "b.wav,3,val\n"
      "sub/c.wav,1,test\n",
      4, "/data");
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[0].audio_path, std::filesystem::path("/data/a.wav"));
  EXPECT_EQ(m.entries[1].label, 3);
  EXPECT_EQ(m.entries[1].split, Split::kVal);
  EXPECT_EQ(m.entries[2].split, Split::kTest);
}

TEST(Manifest, RejectsBadRows) {
  EXPECT_THROW(parse_manifest("path,label,split\na.wav,0,test\na.wav,1,test\n", 4),
               ValidationError);
  EXPECT_THROW(parse_manifest("path,label,split\na.wav,4,test\n", 4), ValidationError);
  EXPECT_THROW(parse_manifest("path,label,split\na.wav,-1,test\n", 4), ValidationError);
  try {
    parse_manifest("path,label,split\na.wav,0,test\nb.wav,1,holdout\n", 4);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_manifest("a.wav,0,test\n", 4), ParseError);
  EXPECT_THROW(parse_manifest("path,label,split\na.wav,zero,test\n", 4), ParseError);
  EXPECT_THROW(parse_manifest("path,label,split\na.wav,0\n", 4), ParseError);
}

TEST(Energy, IdleOverOneHundredBinsAccelerated) {
  const EnergyModelParams p;
  const double t = simulate_latency(100, LatencyMode::kAccelerated, p);
  EXPECT_NEAR(t, 0.084, 1e-12);
  const EnergyBreakdown e = estimate_energy({}, p, t);
  EXPECT_NEAR(e.idle_j, 29.484e-6, 1e-12);
  EXPECT_EQ(e.dynamic_j, 0.0);
  EXPECT_EQ(e.active_j, e.idle_j);
}

TEST(Energy, DynamicIsLinearInCounts) {
  EnergyModelParams p;
  p.energy_per_synop_j = 3e-9;
  p.energy_per_neuron_update_j = 1e-10;
  snn::StepTelemetry a{1000, 50, 7};
  snn::StepTelemetry b{250, 20, 1};
  snn::StepTelemetry ab = a;
  ab += b;
  const double ea = estimate_energy(a, p, 0.1).dynamic_j;
  const double eb = estimate_energy(b, p, 0.1).dynamic_j;
  EXPECT_NEAR(ea, 1000 * 3e-9 + 50 * 1e-10, 1e-18);
  EXPECT_NEAR(estimate_energy(ab, p, 0.1).dynamic_j, ea + eb, 1e-18);
  const EnergyBreakdown e = estimate_energy(a, p, 0.1);
  EXPECT_NEAR(e.active_power_w(), e.active_j / 0.1, 1e-15);
  EXPECT_EQ(estimate_energy(a, p, 0.0).active_power_w(), 0.0);
}

TEST(Energy, CalibrationHitsTarget) {
  EnergyModelParams p;
  p.energy_per_neuron_update_j = 1e-11;
  const double e = calibrate_energy_per_synop(12000.0, 300.0, p, 28.4e-6);
  EXPECT_NEAR(12000.0 * e + 300.0 * 1e-11, 28.4e-6, 1e-15);
  EXPECT_THROW(calibrate_energy_per_synop(0.0, 0.0, p, 1e-6), ConfigError);
}

TEST(Energy, NegativeParametersRejected) {
  EnergyModelParams p;
  p.idle_power_w = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Latency, RealtimeAndAcceleratedExamples) {
  const EnergyModelParams p;
  EXPECT_NEAR(simulate_latency(100, LatencyMode::kRealtime, p), 1.0, 1e-12);
  const double acc = simulate_latency(100, LatencyMode::kAccelerated, p);
  EXPECT_NEAR(1.0 / acc, 11.9, 0.05);
  EXPECT_EQ(simulate_latency(0, LatencyMode::kRealtime, p), 0.0);
  EXPECT_EQ(simulate_latency(0, LatencyMode::kAccelerated, p), 0.0);
  EXPECT_EQ(latency_mode_from_string("accelerated"), LatencyMode::kAccelerated);
  EXPECT_THROW(latency_mode_from_string("fast"), ConfigError);
}

TEST(Latency, ModeDoesNotChangeDecisions) {
  const BenchmarkWorkload w = benchmark_workload();
  const EnergyModelParams p;
  for (const EventRaster& r : w.rasters) {
    snn::InferenceReport a = snn::run_raster(w.network, r);
    snn::InferenceReport b = a;
    attach_energy(a, p);
    EXPECT_EQ(a.decision, b.decision);
    EXPECT_EQ(a.class_spike_counts, b.class_spike_counts);
    EXPECT_EQ(a.telemetry, b.telemetry);
  }
}

class ToneCorpus : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string text = "path,label,split\n";
    for (int c = 0; c < 4; ++c) {
      for (int rep = 0; rep < 2; ++rep) {
        const std::string name = "tone" + std::to_string(c) + "_" + std::to_string(rep) + ".wav";
        io::write_wav(dir_ / name, make_tone(afe_.center_frequency(c), 0.5, 0.3, 48000.0, 0.7 * rep));
        text += name + "," + std::to_string(c) + "," + (rep == 0 ? "test" : "val") + "\n";
      }
    }
    io::write_text_file(dir_ / "manifest.csv", text);
    manifest_ = load_manifest(dir_ / "manifest.csv", 4);
    net_ = tone_detector_network({0, 1, 2, 3});
  }

  testing::TempDir dir_;
  afe::AfeConfig afe_;
  Manifest manifest_;
  snn::QuantNetwork net_;
};

TEST_F(ToneCorpus, ToneDetectorScoresPerfectly) {
  const EvalResult r = evaluate(net_, manifest_, afe_, Split::kTest);
  EXPECT_EQ(r.total, 4);
  EXPECT_EQ(r.correct, 4);
  EXPECT_TRUE(r.accuracy_defined);
  EXPECT_EQ(r.accuracy, 1.0);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(r.confusion_at(c, c), 1);
  EXPECT_EQ(confusion_to_csv(r).substr(0, 5), "truth");
}

TEST_F(ToneCorpus, EmptySplitIsUndefined) {
  const EvalResult r = evaluate(net_, manifest_, afe_, Split::kTrain);
  EXPECT_EQ(r.total, 0);
  EXPECT_FALSE(r.accuracy_defined);
  EXPECT_TRUE(std::isnan(r.accuracy));
}

TEST_F(ToneCorpus, DeterministicAndOrderInvariant) {
  const EvalResult a = evaluate(net_, manifest_, afe_, Split::kVal);
  const EvalResult b = evaluate(net_, manifest_, afe_, Split::kVal);
  EXPECT_EQ(a.confusion, b.confusion);
  EXPECT_EQ(a.telemetry, b.telemetry);

  Manifest shuffled = manifest_;
  std::mt19937_64 rng(4);
  std::shuffle(shuffled.entries.begin(), shuffled.entries.end(), rng);
  const EvalResult c = evaluate(net_, shuffled, afe_, Split::kVal);
  EXPECT_EQ(a.accuracy, c.accuracy);
  EXPECT_EQ(a.confusion, c.confusion);
  EXPECT_EQ(a.telemetry, c.telemetry);
}

TEST_F(ToneCorpus, ThreadCountDoesNotMatter) {
  EvalOptions opts;
  opts.num_threads = 3;
  const EvalResult a = evaluate(net_, manifest_, afe_, Split::kVal);
  const EvalResult b = evaluate(net_, manifest_, afe_, Split::kVal, opts);
  EXPECT_EQ(a.confusion, b.confusion);
  EXPECT_EQ(a.telemetry, b.telemetry);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].decision, b.samples[i].decision);
    EXPECT_EQ(a.samples[i].telemetry, b.samples[i].telemetry);
  }
}

TEST_F(ToneCorpus, CarryStateStillClassifiesSeparatedTones) {
  EvalOptions opts;
  opts.carry_state = true;
  const EvalResult r = evaluate(net_, manifest_, afe_, Split::kTest, opts);
  EXPECT_EQ(r.total, 4);
  EXPECT_GE(r.correct, 3);
}

TEST_F(ToneCorpus, MissingFileIsIoError) {
  Manifest m = manifest_;
  m.entries.push_back({dir_ / "absent.wav", 0, Split::kTest});
  EXPECT_THROW(evaluate(net_, m, afe_, Split::kTest), IoError);
}

TEST(Throughput, ReportsPositiveRate) {
  const BenchmarkWorkload w = benchmark_workload();
  const ThroughputResult t = measure_throughput(w.network, w.rasters, 0.01);
  EXPECT_GT(t.samples, 0);
  EXPECT_GT(t.samples_per_second, 0.0);
  EXPECT_GT(t.realtime_factor, 0.0);
}

}  // namespace
}  // namespace xylosim::runner
