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

#ifndef XYLOSIM_SYNNET_H_
#define XYLOSIM_SYNNET_H_

// Real-valued SynNet construction: a feed-forward chain of LIF layers whose
// synaptic time constants follow the ladder tau_n = 2^n * dt.

#include <cstdint>
#include <vector>

namespace xylosim::synnet {

struct SynNetSpec {
  std::vector<int> hidden_widths{31, 31, 31};
  std::vector<int> tau_counts{3, 7, 7};
  int num_inputs = 16;
  int num_classes = 4;
  double dt_s = 0.010;
  double tau_mem_s = 0.020;

  void validate() const;
};

struct FloatLayer {
  int rows = 0;
  int cols = 0;
  std::vector<double> weights;  // row-major [rows][cols]
  std::vector<double> tau_syn_s;
  std::vector<double> tau_mem_s;
  std::vector<double> threshold;
  int max_spikes_per_step = 15;

  double weight(int row, int col) const {
    return weights[static_cast<std::size_t>(row) * cols + col];
  }
  double& weight(int row, int col) {
    return weights[static_cast<std::size_t>(row) * cols + col];
  }

  bool operator==(const FloatLayer&) const = default;
};

struct FloatNetwork {
  std::vector<FloatLayer> hidden_layers;
  FloatLayer readout;
  double dt_s = 0.010;

  int num_layers() const { return static_cast<int>(hidden_layers.size()) + 1; }
  const FloatLayer& layer(int i) const {
    return i < static_cast<int>(hidden_layers.size()) ? hidden_layers[i] : readout;
  }
  FloatLayer& layer(int i) {
    return i < static_cast<int>(hidden_layers.size()) ? hidden_layers[i] : readout;
  }

  void validate() const;

  bool operator==(const FloatNetwork&) const = default;
};

// Splits `width` neurons into `count` contiguous groups, the earliest groups
// taking the remainder. Group g gets tau = 2^(g+1) * dt.
std::vector<double> assign_time_constants(int width, int count, double dt_s);

// Uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)], thresholds 1.0.
FloatNetwork build_synnet(const SynNetSpec& spec, std::uint64_t seed);

}  // namespace xylosim::synnet

#endif  // XYLOSIM_SYNNET_H_
