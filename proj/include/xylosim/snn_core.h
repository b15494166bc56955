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

#ifndef XYLOSIM_SNN_CORE_H_
#define XYLOSIM_SNN_CORE_H_

// Integer LIF engine: 8-bit weights, 16-bit saturating synaptic and membrane
// state, shift-based exponential decay and one network step per raster bin.

#include <cstdint>
#include <span>
#include <vector>

#include "xylosim/raster.h"

namespace xylosim::snn {

inline constexpr int kMaxDash = 15;
inline constexpr int kStateMin = -32768;
inline constexpr int kStateMax = 32767;

// v - (v >> dash), with arithmetic (flooring) shift. Retains a fraction
// 1 - 2^-dash of the value per step; dash 0 clears it.
std::int16_t decay16(std::int16_t value, int dash);

// a + b clamped to the 16-bit range.
std::int16_t sat_add16(std::int16_t a, std::int32_t b);

struct QuantLayer {
  int rows = 0;  // output neurons
  int cols = 0;  // inputs
  std::vector<std::int8_t> weights;  // row-major [rows][cols]
  std::vector<std::uint8_t> syn_dash;
  std::vector<std::uint8_t> mem_dash;
  std::vector<std::int16_t> threshold;
  int max_spikes_per_step = 15;

  QuantLayer() = default;
  // Zero weights, the given per-neuron constants broadcast to every row.
  QuantLayer(int rows, int cols, int syn_dash, int mem_dash, int threshold,
             int max_spikes_per_step = 15);

  std::int8_t weight(int row, int col) const {
    return weights[static_cast<std::size_t>(row) * cols + col];
  }
  std::int8_t& weight(int row, int col) {
    return weights[static_cast<std::size_t>(row) * cols + col];
  }

  // Throws ShapeError / ConfigError.
  void validate() const;

  bool operator==(const QuantLayer&) const = default;
};

struct QuantNetwork {
  std::vector<QuantLayer> hidden_layers;
  QuantLayer readout;
  double dt_s = 0.010;

  int num_inputs() const;
  int num_classes() const { return readout.rows; }
  int num_layers() const { return static_cast<int>(hidden_layers.size()) + 1; }
  // Hidden layers followed by the readout.
  const QuantLayer& layer(int index) const;

  void validate() const;

  bool operator==(const QuantNetwork&) const = default;
};

struct LayerState {
  std::vector<std::int16_t> i_syn;
  std::vector<std::int16_t> v_mem;

  LayerState() = default;
  explicit LayerState(int neurons)
      : i_syn(static_cast<std::size_t>(neurons), 0),
        v_mem(static_cast<std::size_t>(neurons), 0) {}
  void reset();

  bool operator==(const LayerState&) const = default;
};

struct StepTelemetry {
  std::uint64_t syn_ops = 0;
  std::uint64_t neuron_updates = 0;
  std::uint64_t spikes_emitted = 0;

  StepTelemetry& operator+=(const StepTelemetry& other);
  bool operator==(const StepTelemetry&) const = default;
};

// One integer LIF step for every neuron of `layer`, in this order:
//   i_syn <- decay16(i_syn, syn_dash) then += W . input
//   v_mem <- decay16(v_mem, mem_dash) then += i_syn
//   k = min(v_mem / threshold, cap) spikes, v_mem -= k * threshold
// `spikes` receives per-neuron spike counts.
StepTelemetry layer_step(const QuantLayer& layer, LayerState& state,
                         std::span<const EventCount> input,
                         std::span<EventCount> spikes);

// Per-inference state for every layer plus scratch spike buffers.
class NetworkState {
 public:
  explicit NetworkState(const QuantNetwork& net);
  void reset();

  LayerState& layer(int i) { return layers_[i]; }
  const LayerState& layer(int i) const { return layers_[i]; }
  int num_layers() const { return static_cast<int>(layers_.size()); }

 private:
  friend StepTelemetry network_step(const QuantNetwork&, NetworkState&,
                                    std::span<const EventCount>,
                                    std::span<EventCount>);
  std::vector<LayerState> layers_;
  std::vector<std::vector<EventCount>> spikes_;
};

// Feeds `input` through every layer within the same step. Writes readout
// spike counts to `readout_spikes`.
StepTelemetry network_step(const QuantNetwork& net, NetworkState& state,
                           std::span<const EventCount> input,
                           std::span<EventCount> readout_spikes);

struct InferenceReport {
  int decision = 0;
  std::vector<std::uint64_t> class_spike_counts;
  StepTelemetry telemetry;
  std::int64_t simulated_steps = 0;
  // Filled by the energy model; zero straight out of the simulator.
  double estimated_dynamic_energy_j = 0.0;
  double estimated_active_energy_j = 0.0;
  // Readout v_mem per step, row-major [step][class]; empty unless requested.
  std::vector<std::int16_t> readout_traces;

  bool operator==(const InferenceReport&) const = default;
};

// Lowest index wins ties.
int argmax_decision(std::span<const std::uint64_t> counts);

// Stateful simulation over a raster that may arrive in chunks.
class NetworkRunner {
 public:
  NetworkRunner(const QuantNetwork& net, bool record_traces);

  void reset();
  // Steps the network once per bin of `raster`.
  void feed(const EventRaster& raster);
  InferenceReport report() const;

  const NetworkState& state() const { return state_; }

 private:
  const QuantNetwork& net_;
  bool record_traces_;
  NetworkState state_;
  InferenceReport report_;
  std::vector<EventCount> readout_spikes_;
};

// Zero-resets all state, runs every bin and returns the accumulated report.
InferenceReport run_raster(const QuantNetwork& net, const EventRaster& raster,
                           bool record_traces = false);

}  // namespace xylosim::snn

#endif  // XYLOSIM_SNN_CORE_H_
