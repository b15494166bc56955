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
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "xylosim/errors.h"
#include "xylosim/formats.h"
#include "xylosim/quant.h"
#include "xylosim/synnet.h"
#include "xylosim/wav.h"

namespace xylosim::runner {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split '" + name + "' (expected train, val or test)");
}

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "test";
}

Manifest parse_manifest(const std::string& text, int num_classes,
                        const std::filesystem::path& base_dir) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  Manifest manifest;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != "path,label,split") {
        throw ParseError("expected header 'path,label,split'", line_no);
      }
      saw_header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw ParseError("expected 3 fields: path,label,split", line_no);
    }
    const std::string path = trim(line.substr(0, c1));
    const std::string label_text = trim(line.substr(c1 + 1, c2 - c1 - 1));
    const std::string split_text = trim(line.substr(c2 + 1));
    if (path.empty()) throw ParseError("empty path", line_no);

    int label = 0;
    try {
      std::size_t used = 0;
      label = std::stoi(label_text, &used);
      if (used != label_text.size()) throw std::invalid_argument(label_text);
    } catch (const std::logic_error&) {
      throw ParseError("label '" + label_text + "' is not an integer", line_no);
    }
    if (label < 0 || label >= num_classes) {
      throw ValidationError("line " + std::to_string(line_no) + ": label " +
                            std::to_string(label) + " outside [0, " +
                            std::to_string(num_classes) + ")");
    }
    Split split;
    try {
      split = split_from_string(split_text);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    const std::string key = p.lexically_normal().string();
    if (!seen.insert(key).second) {
      throw ValidationError("duplicate manifest path " + path);
    }
    manifest.entries.push_back({p, label, split});
  }
  if (!saw_header) throw ParseError("manifest is empty (missing header)", line_no);
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path, int num_classes) {
  return parse_manifest(io::read_text_file(path), num_classes, path.parent_path());
}

void EnergyModelParams::validate() const {
  if (!(idle_power_w >= 0.0) || !(energy_per_synop_j >= 0.0) ||
      !(energy_per_neuron_update_j >= 0.0) || !(clock_hz >= 0.0)) {
    throw ConfigError("energy model parameters must be non-negative");
  }
}

double EnergyBreakdown::idle_power_w() const {
  return wall_time_s > 0.0 ? idle_j / wall_time_s : 0.0;
}
double EnergyBreakdown::dynamic_power_w() const {
  return wall_time_s > 0.0 ? dynamic_j / wall_time_s : 0.0;
}
double EnergyBreakdown::active_power_w() const {
  return wall_time_s > 0.0 ? active_j / wall_time_s : 0.0;
}

EnergyBreakdown estimate_energy(const snn::StepTelemetry& telemetry,
                                const EnergyModelParams& params,
                                double wall_time_s) {
  EnergyBreakdown e;
  e.wall_time_s = wall_time_s;
  e.dynamic_j = static_cast<double>(telemetry.syn_ops) * params.energy_per_synop_j +
                static_cast<double>(telemetry.neuron_updates) *
                    params.energy_per_neuron_update_j;
  e.idle_j = params.idle_power_w * wall_time_s;
  e.active_j = e.idle_j + e.dynamic_j;
  return e;
}

double calibrate_energy_per_synop(double mean_syn_ops, double mean_neuron_updates,
                                  const EnergyModelParams& params,
                                  double target_dynamic_j) {
  if (!(mean_syn_ops > 0.0)) {
    throw ConfigError("cannot calibrate per-SynOp energy without SynOps");
  }
  const double remaining =
      target_dynamic_j - mean_neuron_updates * params.energy_per_neuron_update_j;
  if (remaining < 0.0) {
    throw ConfigError("neuron-update energy alone exceeds the dynamic target");
  }
  return remaining / mean_syn_ops;
}

LatencyMode latency_mode_from_string(const std::string& name) {
  if (name == "realtime") return LatencyMode::kRealtime;
  if (name == "accelerated") return LatencyMode::kAccelerated;
  throw ConfigError("unknown latency mode '" + name + "'");
}

double simulate_latency(std::int64_t num_bins, LatencyMode mode,
                        const EnergyModelParams& params,
                        std::int64_t per_step_cost_cycles, double dt_s) {
  if (num_bins <= 0) return 0.0;
  if (mode == LatencyMode::kRealtime) return static_cast<double>(num_bins) * dt_s;
  if (!(params.clock_hz > 0.0)) throw ConfigError("clock_hz must be > 0");
  return static_cast<double>(num_bins) * static_cast<double>(per_step_cost_cycles) /
         params.clock_hz;
}

void attach_energy(snn::InferenceReport& report, const EnergyModelParams& params,
                   std::int64_t per_step_cost_cycles, double dt_s) {
  const double wall = simulate_latency(report.simulated_steps, LatencyMode::kAccelerated,
                                       params, per_step_cost_cycles, dt_s);
  const EnergyBreakdown e = estimate_energy(report.telemetry, params, wall);
  report.estimated_dynamic_energy_j = e.dynamic_j;
  report.estimated_active_energy_j = e.active_j;
}

namespace {

SampleResult classify_entry(const snn::QuantNetwork& net, const ManifestEntry& entry,
                            const afe::AfeConfig& afe) {
  const afe::AudioBuffer audio = io::read_wav(entry.audio_path);
  if (audio.sample_rate_hz != afe.sample_rate_hz) {
    std::ostringstream os;
    os << entry.audio_path.string() << ": sample rate " << audio.sample_rate_hz
       << " Hz does not match configured " << afe.sample_rate_hz << " Hz";
    throw ConfigError(os.str());
  }
  const EventRaster raster = afe::encode_audio(audio, afe);
  const snn::InferenceReport report = snn::run_raster(net, raster);
  return {entry.label, report.decision, report.telemetry, report.simulated_steps};
}

}  // namespace

EvalResult evaluate(const snn::QuantNetwork& net, const Manifest& manifest,
                    const afe::AfeConfig& afe, Split split,
                    const EvalOptions& options) {
  net.validate();
  afe.validate();
  if (net.num_inputs() != afe.num_bands) {
    throw ShapeError("network expects " + std::to_string(net.num_inputs()) +
                     " inputs but the front-end produces " +
                     std::to_string(afe.num_bands) + " bands");
  }
  std::vector<const ManifestEntry*> selected;
  for (const auto& e : manifest.entries) {
    if (e.split != split) continue;
    if (e.label < 0 || e.label >= net.num_classes()) {
      throw ValidationError("label " + std::to_string(e.label) + " for " +
                            e.audio_path.string() + " outside network classes");
    }
    if (!std::filesystem::is_regular_file(e.audio_path)) {
      throw IoError("missing audio file " + e.audio_path.string());
    }
    selected.push_back(&e);
  }

  EvalResult result;
  result.num_classes = net.num_classes();
  result.confusion.assign(static_cast<std::size_t>(result.num_classes) * result.num_classes, 0);
  result.samples.resize(selected.size());

  if (options.carry_state) {
    afe::AfeEncoder encoder(afe);
    snn::NetworkRunner runner(net, false);
    for (std::size_t i = 0; i < selected.size(); ++i) {
      const afe::AudioBuffer audio = io::read_wav(selected[i]->audio_path);
      if (audio.sample_rate_hz != afe.sample_rate_hz) {
        throw ConfigError(selected[i]->audio_path.string() +
                          ": sample rate does not match configuration");
      }
      const snn::InferenceReport before = runner.report();
      runner.feed(encoder.push(audio.samples));
      const snn::InferenceReport after = runner.report();
      std::vector<std::uint64_t> counts(after.class_spike_counts.size());
      for (std::size_t c = 0; c < counts.size(); ++c) {
        counts[c] = after.class_spike_counts[c] - before.class_spike_counts[c];
      }
      SampleResult& s = result.samples[i];
      s.label = selected[i]->label;
      s.decision = snn::argmax_decision(counts);
      s.telemetry.syn_ops = after.telemetry.syn_ops - before.telemetry.syn_ops;
      s.telemetry.neuron_updates = after.telemetry.neuron_updates - before.telemetry.neuron_updates;
      s.telemetry.spikes_emitted = after.telemetry.spikes_emitted - before.telemetry.spikes_emitted;
      s.simulated_steps = after.simulated_steps - before.simulated_steps;
    }
  } else {
    const int workers = std::max(1, std::min<int>(options.num_threads,
                                                  static_cast<int>(selected.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t i = next++; i < selected.size(); i = next++) {
        try {
          result.samples[i] = classify_entry(net, *selected[i], afe);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = selected.size();
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
  }

  for (const SampleResult& s : result.samples) {
    ++result.total;
    result.correct += (s.decision == s.label);
    ++result.confusion[static_cast<std::size_t>(s.label) * result.num_classes + s.decision];
    result.telemetry += s.telemetry;
    result.simulated_steps += s.simulated_steps;
  }
  result.accuracy_defined = result.total > 0;
  result.accuracy = result.accuracy_defined
                        ? static_cast<double>(result.correct) / result.total
                        : std::numeric_limits<double>::quiet_NaN();
  return result;
}

std::string confusion_to_csv(const EvalResult& result) {
  std::ostringstream os;
  os << "truth";
  for (int p = 0; p < result.num_classes; ++p) os << ",pred_" << p;
  os << '\n';
  for (int t = 0; t < result.num_classes; ++t) {
    os << t;
    for (int p = 0; p < result.num_classes; ++p) os << ',' << result.confusion_at(t, p);
    os << '\n';
  }
  return os.str();
}

snn::QuantNetwork tone_detector_network(const std::vector<int>& class_bands,
                                        int num_inputs) {
  constexpr int kExcite = 127;
  constexpr int kInhibit = -32;
  constexpr int kThreshold = 100;
  if (class_bands.empty()) throw ConfigError("tone detector needs at least one class");
  snn::QuantNetwork net;
  net.readout = snn::QuantLayer(static_cast<int>(class_bands.size()), num_inputs,
                                /*syn_dash=*/1, /*mem_dash=*/1, kThreshold);
  for (std::size_t c = 0; c < class_bands.size(); ++c) {
    for (std::size_t other = 0; other < class_bands.size(); ++other) {
      const int band = class_bands[other];
      if (band < 0 || band >= num_inputs) {
        throw ConfigError("tone detector band " + std::to_string(band) + " out of range");
      }
      net.readout.weight(static_cast<int>(c), band) =
          static_cast<std::int8_t>(c == other ? kExcite : kInhibit);
    }
  }
  net.validate();
  return net;
}

afe::AudioBuffer make_tone(double frequency_hz, double amplitude, double seconds,
                           double sample_rate_hz, double phase) {
  afe::AudioBuffer audio;
  audio.sample_rate_hz = sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate_hz));
  audio.samples.resize(n);
  const double w = 2.0 * std::numbers::pi * frequency_hz / sample_rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    audio.samples[i] = amplitude * std::sin(w * static_cast<double>(i) + phase);
  }
  return audio;
}

afe::AudioBuffer make_noise(double amplitude, double seconds, std::uint64_t seed,
                            double sample_rate_hz) {
  afe::AudioBuffer audio;
  audio.sample_rate_hz = sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate_hz));
  audio.samples.resize(n);
  std::mt19937_64 rng(seed);
  for (double& x : audio.samples) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = amplitude * (2.0 * unit - 1.0);
  }
  return audio;
}

BenchmarkWorkload benchmark_workload(const afe::AfeConfig& afe) {
  BenchmarkWorkload w;
  synnet::SynNetSpec spec;
  spec.num_inputs = afe.num_bands;
  w.network = quant::quantize_network(synnet::build_synnet(spec, 0)).network;
  for (int i = 0; i < 10; ++i) {
    afe::AudioBuffer audio = make_noise(0.1, 1.0, static_cast<std::uint64_t>(i),
                                        afe.sample_rate_hz);
    const afe::AudioBuffer tone =
        make_tone(afe.center_frequency((3 * i) % afe.num_bands), 0.4, 1.0,
                  afe.sample_rate_hz);
    for (std::size_t k = 0; k < audio.samples.size(); ++k) audio.samples[k] += tone.samples[k];
    w.rasters.push_back(afe::encode_audio(audio, afe));
  }
  return w;
}

ThroughputResult measure_throughput(const snn::QuantNetwork& net,
                                    const std::vector<EventRaster>& rasters,
                                    double min_seconds) {
  if (rasters.empty()) throw ConfigError("throughput measurement needs rasters");
  using clock = std::chrono::steady_clock;
  ThroughputResult r;
  double simulated = 0.0;
  std::uint64_t sink = 0;
  const auto start = clock::now();
  do {
    for (const EventRaster& raster : rasters) {
      const snn::InferenceReport rep = snn::run_raster(net, raster);
      sink += rep.telemetry.spikes_emitted;
      simulated += raster.num_bins * raster.bin_dt_s;
      ++r.samples;
    }
    r.seconds = std::chrono::duration<double>(clock::now() - start).count();
  } while (r.seconds < min_seconds);
  static_cast<void>(sink);
  r.samples_per_second = r.samples / r.seconds;
  r.realtime_factor = simulated / r.seconds;
  return r;
}

}  // namespace xylosim::runner
