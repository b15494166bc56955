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

#include "xylosim/snn_core.h"

#include <algorithm>
#include <limits>
#include <string>

#include "xylosim/errors.h"

namespace xylosim::snn {

std::int16_t decay16(std::int16_t value, int dash) {
  // >> on a negative signed value is arithmetic since C++20.
  const int v = value;
  return static_cast<std::int16_t>(v - (v >> dash));
}

std::int16_t sat_add16(std::int16_t a, std::int32_t b) {
  const std::int64_t sum = static_cast<std::int64_t>(a) + b;
  return static_cast<std::int16_t>(std::clamp<std::int64_t>(sum, kStateMin, kStateMax));
}

QuantLayer::QuantLayer(int rows_, int cols_, int syn, int mem, int thr,
                       int max_spikes)
    : rows(rows_),
      cols(cols_),
      weights(static_cast<std::size_t>(rows_) * cols_, 0),
      syn_dash(static_cast<std::size_t>(rows_), static_cast<std::uint8_t>(syn)),
      mem_dash(static_cast<std::size_t>(rows_), static_cast<std::uint8_t>(mem)),
      threshold(static_cast<std::size_t>(rows_), static_cast<std::int16_t>(thr)),
      max_spikes_per_step(max_spikes) {}

void QuantLayer::validate() const {
  if (rows < 1 || cols < 1) throw ShapeError("layer must have at least one row and column");
  const auto n = static_cast<std::size_t>(rows);
  if (weights.size() != n * cols) {
    throw ShapeError("weights hold " + std::to_string(weights.size()) +
                     " values, expected " + std::to_string(n * cols));
  }
  if (syn_dash.size() != n || mem_dash.size() != n || threshold.size() != n) {
    throw ShapeError("per-neuron parameter lengths must equal rows");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (syn_dash[j] > kMaxDash || mem_dash[j] > kMaxDash) {
      throw ConfigError("dash values must lie in [0, 15]");
    }
    if (threshold[j] < 1) throw ConfigError("thresholds must lie in [1, 32767]");
  }
  if (max_spikes_per_step < 1) throw ConfigError("max_spikes_per_step must be >= 1");
}

int QuantNetwork::num_inputs() const {
  return hidden_layers.empty() ? readout.cols : hidden_layers.front().cols;
}

const QuantLayer& QuantNetwork::layer(int index) const {
  return index < static_cast<int>(hidden_layers.size()) ? hidden_layers[index]
                                                        : readout;
}

void QuantNetwork::validate() const {
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be > 0");
  for (int i = 0; i < num_layers(); ++i) {
    layer(i).validate();
    if (i > 0 && layer(i).cols != layer(i - 1).rows) {
      throw ShapeError("layer " + std::to_string(i) + " expects " +
                       std::to_string(layer(i).cols) + " inputs but layer " +
                       std::to_string(i - 1) + " has " +
                       std::to_string(layer(i - 1).rows) + " outputs");
    }
  }
}

void LayerState::reset() {
  std::fill(i_syn.begin(), i_syn.end(), 0);
  std::fill(v_mem.begin(), v_mem.end(), 0);
}

StepTelemetry& StepTelemetry::operator+=(const StepTelemetry& other) {
  syn_ops += other.syn_ops;
  neuron_updates += other.neuron_updates;
  spikes_emitted += other.spikes_emitted;
  return *this;
}

StepTelemetry layer_step(const QuantLayer& layer, LayerState& state,
                         std::span<const EventCount> input,
                         std::span<EventCount> spikes) {
  if (static_cast<int>(input.size()) != layer.cols) {
    throw ShapeError("layer expects " + std::to_string(layer.cols) +
                     " inputs, got " + std::to_string(input.size()));
  }
  if (static_cast<int>(spikes.size()) != layer.rows ||
      static_cast<int>(state.i_syn.size()) != layer.rows ||
      static_cast<int>(state.v_mem.size()) != layer.rows) {
    throw ShapeError("layer state or output width does not match layer rows");
  }

  std::uint64_t active_inputs = 0;
  for (EventCount c : input) active_inputs += (c != 0);

  StepTelemetry t;
  t.syn_ops = active_inputs * static_cast<std::uint64_t>(layer.rows);
  t.neuron_updates = static_cast<std::uint64_t>(layer.rows);
  const auto cap = static_cast<std::int64_t>(layer.max_spikes_per_step);

  for (int j = 0; j < layer.rows; ++j) {
    std::int64_t drive = 0;
    if (active_inputs != 0) {
      const std::int8_t* row = layer.weights.data() + static_cast<std::size_t>(j) * layer.cols;
      for (int i = 0; i < layer.cols; ++i) {
        drive += static_cast<std::int64_t>(row[i]) * input[i];
      }
    }
    const auto drive32 = static_cast<std::int32_t>(std::clamp<std::int64_t>(
        drive, std::numeric_limits<std::int32_t>::min(),
        std::numeric_limits<std::int32_t>::max()));

    std::int16_t isyn = decay16(state.i_syn[j], layer.syn_dash[j]);
    isyn = sat_add16(isyn, drive32);
    std::int16_t v = decay16(state.v_mem[j], layer.mem_dash[j]);
    v = sat_add16(v, isyn);

    const std::int64_t thr = layer.threshold[j];
    std::int64_t k = v >= thr ? std::min<std::int64_t>(v / thr, cap) : 0;
    v = static_cast<std::int16_t>(v - k * thr);

    state.i_syn[j] = isyn;
    state.v_mem[j] = v;
    spikes[j] = static_cast<EventCount>(k);
    t.spikes_emitted += static_cast<std::uint64_t>(k);
  }
  return t;
}

NetworkState::NetworkState(const QuantNetwork& net) {
  for (int i = 0; i < net.num_layers(); ++i) {
    layers_.emplace_back(net.layer(i).rows);
    spikes_.emplace_back(static_cast<std::size_t>(net.layer(i).rows), 0);
  }
}

void NetworkState::reset() {
  for (auto& l : layers_) l.reset();
  for (auto& s : spikes_) std::fill(s.begin(), s.end(), 0);
}

StepTelemetry network_step(const QuantNetwork& net, NetworkState& state,
                           std::span<const EventCount> input,
                           std::span<EventCount> readout_spikes) {
  if (state.num_layers() != net.num_layers()) {
    throw ShapeError("network state does not match network depth");
  }
  if (static_cast<int>(input.size()) != net.num_inputs()) {
    throw ShapeError("network expects " + std::to_string(net.num_inputs()) +
                     " input channels, got " + std::to_string(input.size()));
  }
  StepTelemetry total;
  std::span<const EventCount> x = input;
  for (int i = 0; i < net.num_layers(); ++i) {
    auto& out = state.spikes_[i];
    total += layer_step(net.layer(i), state.layers_[i], x, out);
    x = out;
  }
  if (readout_spikes.size() != x.size()) {
    throw ShapeError("readout buffer width does not match class count");
  }
  std::copy(x.begin(), x.end(), readout_spikes.begin());
  return total;
}

int argmax_decision(std::span<const std::uint64_t> counts) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(counts.size()); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

NetworkRunner::NetworkRunner(const QuantNetwork& net, bool record_traces)
    : net_(net),
      record_traces_(record_traces),
      state_(net),
      readout_spikes_(static_cast<std::size_t>(net.num_classes()), 0) {
  reset();
}

void NetworkRunner::reset() {
  state_.reset();
  report_ = InferenceReport{};
  report_.class_spike_counts.assign(static_cast<std::size_t>(net_.num_classes()), 0);
}

void NetworkRunner::feed(const EventRaster& raster) {
  if (raster.num_channels != net_.num_inputs()) {
    throw ShapeError("raster has " + std::to_string(raster.num_channels) +
                     " channels, network expects " +
                     std::to_string(net_.num_inputs()));
  }
  const int readout = net_.num_layers() - 1;
  for (int b = 0; b < raster.num_bins; ++b) {
    report_.telemetry += network_step(net_, state_, raster.bin(b), readout_spikes_);
    for (std::size_t c = 0; c < readout_spikes_.size(); ++c) {
      report_.class_spike_counts[c] += readout_spikes_[c];
    }
    if (record_traces_) {
      const auto& v = state_.layer(readout).v_mem;
      report_.readout_traces.insert(report_.readout_traces.end(), v.begin(), v.end());
    }
    ++report_.simulated_steps;
  }
}

InferenceReport NetworkRunner::report() const {
  InferenceReport r = report_;
  r.decision = argmax_decision(r.class_spike_counts);
  return r;
}

InferenceReport run_raster(const QuantNetwork& net, const EventRaster& raster,
                           bool record_traces) {
  net.validate();
  NetworkRunner runner(net, record_traces);
  runner.feed(raster);
  return runner.report();
}

}  // namespace xylosim::snn
