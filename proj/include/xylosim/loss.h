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

#ifndef XYLOSIM_LOSS_H_
#define XYLOSIM_LOSS_H_

#include <vector>

namespace xylosim::loss {

// Readout membrane potentials, row-major [step][channel].
struct TraceMatrix {
  int num_steps = 0;
  int num_channels = 0;
  double dt_s = 0.010;
  std::vector<double> values;

  double at(int step, int channel) const {
    return values[static_cast<std::size_t>(step) * num_channels + channel];
  }

  // Shape checks throw ShapeError, non-finite values NumericalError.
  void validate() const;
};

struct PeakLossParams {
  double window_s = 0.100;
  double target_peak = 1.5;
  double off_target_weight = 1.0;
};

struct PeakLossTerms {
  double target = 0.0;
  double off_target = 0.0;  // already weighted by off_target_weight
  double total() const { return target + off_target; }
};

// Target channel: (mean over the window starting at its first maximum - g)^2,
// the window being round(M / dt) steps truncated at the trace end.
// Every other channel: w_l * mean of squares.
PeakLossTerms peak_loss_terms(const TraceMatrix& traces, int target_class,
                              const PeakLossParams& params = {});

double peak_loss(const TraceMatrix& traces, int target_class,
                 const PeakLossParams& params = {});

}  // namespace xylosim::loss

#endif  // XYLOSIM_LOSS_H_
