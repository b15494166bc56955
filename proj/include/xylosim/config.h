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

#ifndef XYLOSIM_CONFIG_H_
#define XYLOSIM_CONFIG_H_

// Key-value configuration file:
//
//   # comment
//   [afe]
//   gain_db = 6
//   [synnet]
//   hidden_widths = 31, 31, 31
//
// Sections: afe, encoder, synnet, quant, energy. Unknown sections or keys
// are rejected with the offending line number.

#include <cstdint>
#include <filesystem>
#include <string>

#include "xylosim/afe.h"
#include "xylosim/quant.h"
#include "xylosim/runner.h"
#include "xylosim/synnet.h"

namespace xylosim::config {

struct RunConfig {
  afe::AfeConfig afe;
  synnet::SynNetSpec synnet;
  quant::QuantOptions quant;
  runner::EnergyModelParams energy;
  std::int64_t per_step_cost_cycles = runner::kCalibratedStepCycles;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace xylosim::config

#endif  // XYLOSIM_CONFIG_H_
