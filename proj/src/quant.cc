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

#include "xylosim/quant.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "xylosim/errors.h"

namespace xylosim::quant {

int dash_from_tau(double tau_s, double dt_s) {
  if (!(dt_s > 0.0) || !std::isfinite(tau_s) || tau_s < dt_s / 2.0) {
    std::ostringstream os;
    os << "tau " << tau_s << " s is shorter than half the step " << dt_s << " s";
    throw ConfigError(os.str());
  }
  const double n = std::round(std::log2(tau_s / dt_s));
  return static_cast<int>(std::clamp(n, 0.0, static_cast<double>(snn::kMaxDash)));
}

std::int64_t round_half_away(double x) {
  return static_cast<std::int64_t>(std::round(x));
}

namespace {

snn::QuantLayer quantize_layer(const synnet::FloatLayer& layer, double dt_s,
                               const QuantOptions& options,
                               LayerQuantStats& stats,
                               std::map<double, int>& dash_table) {
  double max_abs = 0.0;
  for (double w : layer.weights) {
    if (!std::isfinite(w)) throw NumericalError("non-finite weight");
    max_abs = std::max(max_abs, std::abs(w));
  }
  const double scale = max_abs > 0.0 ? 127.0 / max_abs : 1.0;

  snn::QuantLayer q;
  q.rows = layer.rows;
  q.cols = layer.cols;
  q.max_spikes_per_step = layer.max_spikes_per_step;
  q.weights.reserve(layer.weights.size());
  double sq_err = 0.0;
  for (double w : layer.weights) {
    const auto wq = static_cast<std::int8_t>(
        std::clamp<std::int64_t>(round_half_away(w * scale), -128, 127));
    q.weights.push_back(wq);
    const double err = w - wq / scale;
    sq_err += err * err;
  }

  for (int j = 0; j < layer.rows; ++j) {
    const double theta = layer.threshold[j];
    if (!std::isfinite(theta)) throw NumericalError("non-finite threshold");
    q.threshold.push_back(static_cast<std::int16_t>(std::clamp<std::int64_t>(
        round_half_away(theta * scale * options.threshold_headroom), 1,
        snn::kStateMax)));
    const int syn = dash_from_tau(layer.tau_syn_s[j], dt_s);
    const int mem = dash_from_tau(layer.tau_mem_s[j], dt_s);
    dash_table[layer.tau_syn_s[j]] = syn;
    dash_table[layer.tau_mem_s[j]] = mem;
    q.syn_dash.push_back(static_cast<std::uint8_t>(syn));
    q.mem_dash.push_back(static_cast<std::uint8_t>(mem));
  }

  stats.scale = scale;
  stats.max_abs_weight = max_abs;
  stats.mse = layer.weights.empty() ? 0.0 : sq_err / layer.weights.size();
  return q;
}

}  // namespace

QuantResult quantize_network(const synnet::FloatNetwork& net,
                             const QuantOptions& options) {
  net.validate();
  QuantResult result;
  result.network.dt_s = net.dt_s;
  std::map<double, int> dash_table;
  for (int i = 0; i < net.num_layers(); ++i) {
    LayerQuantStats stats;
    snn::QuantLayer q = quantize_layer(net.layer(i), net.dt_s, options, stats, dash_table);
    result.report.layers.push_back(stats);
    if (i + 1 < net.num_layers()) {
      result.network.hidden_layers.push_back(std::move(q));
    } else {
      result.network.readout = std::move(q);
    }
  }
  result.report.dash_table.assign(dash_table.begin(), dash_table.end());
  result.network.validate();
  return result;
}

}  // namespace xylosim::quant
