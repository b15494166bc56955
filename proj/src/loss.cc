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

#include "xylosim/loss.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "xylosim/errors.h"

namespace xylosim::loss {

void TraceMatrix::validate() const {
  if (num_steps < 1 || num_channels < 2) {
    throw ShapeError("traces need at least 1 step and 2 channels");
  }
  if (values.size() != static_cast<std::size_t>(num_steps) * num_channels) {
    throw ShapeError("trace value count does not match steps x channels");
  }
  if (!(dt_s > 0.0)) throw ConfigError("trace dt_s must be > 0");
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericalError("non-finite trace value");
  }
}

PeakLossTerms peak_loss_terms(const TraceMatrix& traces, int target_class,
                              const PeakLossParams& params) {
  traces.validate();
  if (target_class < 0 || target_class >= traces.num_channels) {
    throw IndexError("target class " + std::to_string(target_class) +
                     " outside [0, " + std::to_string(traces.num_channels) + ")");
  }
  if (!(params.window_s >= traces.dt_s) || !(params.off_target_weight >= 0.0) ||
      !std::isfinite(params.target_peak)) {
    throw ConfigError("peak loss needs window_s >= dt_s and off_target_weight >= 0");
  }

  const int steps = traces.num_steps;
  int peak = 0;
  for (int t = 1; t < steps; ++t) {
    if (traces.at(t, target_class) > traces.at(peak, target_class)) peak = t;
  }
  const auto window = static_cast<int>(
      std::max(1.0, std::round(params.window_s / traces.dt_s)));
  const int end = std::min(steps, peak + window);
  double sum = 0.0;
  for (int t = peak; t < end; ++t) sum += traces.at(t, target_class);
  const double diff = sum / (end - peak) - params.target_peak;

  PeakLossTerms terms;
  terms.target = diff * diff;
  for (int c = 0; c < traces.num_channels; ++c) {
    if (c == target_class) continue;
    double sq = 0.0;
    for (int t = 0; t < steps; ++t) sq += traces.at(t, c) * traces.at(t, c);
    terms.off_target += params.off_target_weight * (sq / steps);
  }
  return terms;
}

double peak_loss(const TraceMatrix& traces, int target_class,
                 const PeakLossParams& params) {
  return peak_loss_terms(traces, target_class, params).total();
}

}  // namespace xylosim::loss
