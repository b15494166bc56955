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

#ifndef XYLOSIM_RUNNER_H_
#define XYLOSIM_RUNNER_H_

// Dataset-level evaluation and the parametric energy / latency model.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xylosim/afe.h"
#include "xylosim/raster.h"
#include "xylosim/snn_core.h"

namespace xylosim::runner {

enum class Split { kTrain, kVal, kTest };

Split split_from_string(const std::string& name);
std::string to_string(Split split);

struct ManifestEntry {
  std::filesystem::path audio_path;
  int label = 0;
  Split split = Split::kTest;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

// CSV with a "path,label,split" header. Relative paths resolve against the
// manifest's directory. Throws ParseError (with line number) on malformed
// rows and ValidationError on duplicate paths or labels outside
// [0, num_classes).
Manifest load_manifest(const std::filesystem::path& path, int num_classes);
Manifest parse_manifest(const std::string& text, int num_classes,
                        const std::filesystem::path& base_dir = {});

// Cycles per simulated step in accelerated mode, chosen so a 100-bin sample
// takes 84 ms at 12.5 MHz.
inline constexpr std::int64_t kCalibratedStepCycles = 10500;

// Joules per SynOp fitted once so the full-size benchmark workload (see
// benchmark_workload) averages 28.4 uJ of dynamic energy per inference.
inline constexpr double kCalibratedEnergyPerSynopJ = 2.0815620510715647e-09;

struct EnergyModelParams {
  double idle_power_w = 351e-6;
  double energy_per_synop_j = kCalibratedEnergyPerSynopJ;
  double energy_per_neuron_update_j = 0.0;
  double clock_hz = 12.5e6;

  // Throws ConfigError on negative values.
  void validate() const;
};

struct EnergyBreakdown {
  double idle_j = 0.0;
  double dynamic_j = 0.0;
  double active_j = 0.0;
  double wall_time_s = 0.0;

  // Average powers over wall_time_s; zero when wall_time_s is zero.
  double idle_power_w() const;
  double dynamic_power_w() const;
  double active_power_w() const;
};

// dynamic = syn_ops * E_synop + neuron_updates * E_update,
// idle = P_idle * wall_time, active = idle + dynamic.
EnergyBreakdown estimate_energy(const snn::StepTelemetry& telemetry,
                                const EnergyModelParams& params,
                                double wall_time_s);

// Solves for the per-SynOp energy that makes the mean telemetry cost
// `target_dynamic_j`, keeping the neuron-update term fixed.
double calibrate_energy_per_synop(double mean_syn_ops, double mean_neuron_updates,
                                  const EnergyModelParams& params,
                                  double target_dynamic_j);

enum class LatencyMode { kRealtime, kAccelerated };

LatencyMode latency_mode_from_string(const std::string& name);

// Realtime: num_bins * dt. Accelerated: num_bins * cycles / clock.
double simulate_latency(std::int64_t num_bins, LatencyMode mode,
                        const EnergyModelParams& params,
                        std::int64_t per_step_cost_cycles = kCalibratedStepCycles,
                        double dt_s = 0.010);

// Fills the report's energy fields using the accelerated-mode latency as
// wall time.
void attach_energy(snn::InferenceReport& report, const EnergyModelParams& params,
                   std::int64_t per_step_cost_cycles = kCalibratedStepCycles,
                   double dt_s = 0.010);

struct EvalOptions {
  int num_threads = 1;
  // Stream the split as one continuous signal: encoder and network state
  // carry over between entries. Always sequential.
  bool carry_state = false;
};

struct SampleResult {
  int label = 0;
  int decision = 0;
  snn::StepTelemetry telemetry;
  std::int64_t simulated_steps = 0;
};

struct EvalResult {
  int num_classes = 0;
  int total = 0;
  int correct = 0;
  // NaN with accuracy_defined == false for an empty split.
  double accuracy = 0.0;
  bool accuracy_defined = false;
  // Row = truth, column = prediction, row-major.
  std::vector<std::int64_t> confusion;
  snn::StepTelemetry telemetry;
  std::int64_t simulated_steps = 0;
  // In manifest order for the selected split.
  std::vector<SampleResult> samples;

  std::int64_t confusion_at(int truth, int predicted) const {
    return confusion[static_cast<std::size_t>(truth) * num_classes + predicted];
  }
};

// Encodes and classifies every entry of `split`. Throws IoError naming the
// first missing file before any work is done.
EvalResult evaluate(const snn::QuantNetwork& net, const Manifest& manifest,
                    const afe::AfeConfig& afe, Split split,
                    const EvalOptions& options = {});

std::string confusion_to_csv(const EvalResult& result);

// Single-layer detector: class c reads band class_bands[c] with a strong
// excitatory weight and is inhibited by the other classes' bands.
snn::QuantNetwork tone_detector_network(const std::vector<int>& class_bands,
                                        int num_inputs = 16);

afe::AudioBuffer make_tone(double frequency_hz, double amplitude, double seconds,
                           double sample_rate_hz = 48000.0, double phase = 0.0);

// Seeded white noise in [-amplitude, amplitude].
afe::AudioBuffer make_noise(double amplitude, double seconds, std::uint64_t seed,
                            double sample_rate_hz = 48000.0);

// Fixed synthetic workload used to calibrate and benchmark the energy model:
// the seed-0 full-size SynNet and ten 1 s noise/tone rasters.
struct BenchmarkWorkload {
  snn::QuantNetwork network;
  std::vector<EventRaster> rasters;
};
BenchmarkWorkload benchmark_workload(const afe::AfeConfig& afe = {});

struct ThroughputResult {
  std::int64_t samples = 0;
  double seconds = 0.0;
  double samples_per_second = 0.0;
  double realtime_factor = 0.0;  // simulated seconds per wall second
};

// Runs the rasters round-robin for at least `min_seconds` of wall time.
ThroughputResult measure_throughput(const snn::QuantNetwork& net,
                                    const std::vector<EventRaster>& rasters,
                                    double min_seconds);

}  // namespace xylosim::runner

#endif  // XYLOSIM_RUNNER_H_
