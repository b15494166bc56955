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

#ifndef XYLOSIM_QUANT_H_
#define XYLOSIM_QUANT_H_

// Deployment pass: FloatNetwork -> QuantNetwork with per-layer symmetric
// max-abs weight scaling, matching threshold scaling and tau -> dash mapping.

#include <cstdint>
#include <utility>
#include <vector>

#include "xylosim/snn_core.h"
#include "xylosim/synnet.h"

namespace xylosim::quant {

struct QuantOptions {
  // Multiplies every scaled threshold (state headroom).
  double threshold_headroom = 1.0;
};

struct LayerQuantStats {
  double scale = 1.0;
  double max_abs_weight = 0.0;
  double mse = 0.0;
};

struct QuantReport {
  std::vector<LayerQuantStats> layers;
  // Distinct time constants seen, ascending, with the dash each maps to.
  std::vector<std::pair<double, int>> dash_table;
};

struct QuantResult {
  snn::QuantNetwork network;
  QuantReport report;
};

// round(log2(tau / dt)) clamped to [0, 15]; ConfigError if tau < dt / 2.
int dash_from_tau(double tau_s, double dt_s);

// Half-away-from-zero rounding used for every integer conversion.
std::int64_t round_half_away(double x);

// Throws NumericalError on non-finite weights or thresholds.
QuantResult quantize_network(const synnet::FloatNetwork& net,
                             const QuantOptions& options = {});

}  // namespace xylosim::quant

#endif  // XYLOSIM_QUANT_H_
