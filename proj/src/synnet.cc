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

#include "xylosim/synnet.h"

#include <cmath>
#include <random>
#include <string>

#include "xylosim/errors.h"

namespace xylosim::synnet {

void SynNetSpec::validate() const {
  if (hidden_widths.size() != tau_counts.size()) {
    throw ConfigError("hidden_widths and tau_counts must have the same length");
  }
  for (std::size_t l = 0; l < hidden_widths.size(); ++l) {
    if (hidden_widths[l] < 1) throw ConfigError("hidden widths must be positive");
    if (tau_counts[l] < 1 || tau_counts[l] > hidden_widths[l]) {
      throw ConfigError("layer " + std::to_string(l) + ": tau count " +
                        std::to_string(tau_counts[l]) + " must lie in [1, " +
                        std::to_string(hidden_widths[l]) + "]");
    }
  }
  if (num_inputs < 1) throw ConfigError("num_inputs must be positive");
  if (num_classes < 1) throw ConfigError("num_classes must be positive");
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be > 0");
  if (!(tau_mem_s > 0.0)) throw ConfigError("tau_mem_s must be > 0");
}

void FloatNetwork::validate() const {
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be > 0");
  for (int i = 0; i < num_layers(); ++i) {
    const FloatLayer& l = layer(i);
    const auto n = static_cast<std::size_t>(l.rows);
    if (l.rows < 1 || l.cols < 1 || l.weights.size() != n * l.cols ||
        l.tau_syn_s.size() != n || l.tau_mem_s.size() != n ||
        l.threshold.size() != n) {
      throw ShapeError("float layer " + std::to_string(i) + " is malformed");
    }
    if (i > 0 && l.cols != layer(i - 1).rows) {
      throw ShapeError("float layer " + std::to_string(i) + " input width " +
                       std::to_string(l.cols) + " does not match previous rows " +
                       std::to_string(layer(i - 1).rows));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!(l.tau_syn_s[j] > 0.0) || !(l.tau_mem_s[j] > 0.0)) {
        throw ConfigError("time constants must be positive");
      }
    }
  }
}

std::vector<double> assign_time_constants(int width, int count, double dt_s) {
  if (count < 1 || count > width) {
    throw ConfigError("tau count " + std::to_string(count) +
                      " must lie in [1, width=" + std::to_string(width) + "]");
  }
  std::vector<double> taus;
  taus.reserve(static_cast<std::size_t>(width));
  const int base = width / count;
  const int extra = width % count;
  for (int g = 0; g < count; ++g) {
    const int size = base + (g < extra ? 1 : 0);
    const double tau = std::ldexp(dt_s, g + 1);
    taus.insert(taus.end(), static_cast<std::size_t>(size), tau);
  }
  return taus;
}

namespace {

// Portable uniform draw in [-bound, bound]; std::uniform_real_distribution is
// not reproducible across standard libraries.
double uniform_symmetric(std::mt19937_64& rng, double bound) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * unit - 1.0) * bound;
}

FloatLayer make_layer(int rows, int cols, std::vector<double> tau_syn,
                      double tau_mem, std::mt19937_64& rng) {
  FloatLayer l;
  l.rows = rows;
  l.cols = cols;
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  l.weights.resize(static_cast<std::size_t>(rows) * cols);
  for (double& w : l.weights) w = uniform_symmetric(rng, bound);
  l.tau_syn_s = std::move(tau_syn);
  l.tau_mem_s.assign(static_cast<std::size_t>(rows), tau_mem);
  l.threshold.assign(static_cast<std::size_t>(rows), 1.0);
  return l;
}

}  // namespace

FloatNetwork build_synnet(const SynNetSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  FloatNetwork net;
  net.dt_s = spec.dt_s;
  int fan_in = spec.num_inputs;
  for (std::size_t l = 0; l < spec.hidden_widths.size(); ++l) {
    const int width = spec.hidden_widths[l];
    net.hidden_layers.push_back(make_layer(
        width, fan_in, assign_time_constants(width, spec.tau_counts[l], spec.dt_s),
        spec.tau_mem_s, rng));
    fan_in = width;
  }
  net.readout = make_layer(
      spec.num_classes, fan_in,
      std::vector<double>(static_cast<std::size_t>(spec.num_classes), spec.tau_mem_s),
      spec.tau_mem_s, rng);
  return net;
}

}  // namespace xylosim::synnet
