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

#include "xylosim/config.h"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "xylosim/errors.h"
#include "xylosim/formats.h"

namespace xylosim::config {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::logic_error&) {
  }
  throw ParseError("expected a number, got '" + v + "'", line);
}

long long to_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::logic_error&) {
  }
  throw ParseError("expected an integer, got '" + v + "'", line);
}

std::vector<int> to_int_list(const std::string& v, int line) {
  std::vector<int> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    out.push_back(static_cast<int>(to_int(trim(item), line)));
  }
  if (out.empty()) throw ParseError("expected a comma-separated integer list", line);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"afe.sample_rate_hz", [](RunConfig& c, const std::string& v, int l) { c.afe.sample_rate_hz = to_double(v, l); }},
      {"afe.num_bands", [](RunConfig& c, const std::string& v, int l) { c.afe.num_bands = static_cast<int>(to_int(v, l)); }},
      {"afe.f_low_hz", [](RunConfig& c, const std::string& v, int l) { c.afe.f_low_hz = to_double(v, l); }},
      {"afe.f_high_hz", [](RunConfig& c, const std::string& v, int l) { c.afe.f_high_hz = to_double(v, l); }},
      {"afe.q_factor", [](RunConfig& c, const std::string& v, int l) { c.afe.q_factor = to_double(v, l); }},
      {"afe.gain_db", [](RunConfig& c, const std::string& v, int l) {
         try {
           c.afe.gain_db = afe::gain_from_db(static_cast<int>(to_int(v, l)));
         } catch (const ConfigError& e) {
           throw ParseError(e.what(), l);
         }
       }},
      {"afe.bin_dt_s", [](RunConfig& c, const std::string& v, int l) { c.afe.bin_dt_s = to_double(v, l); }},
      {"encoder.tau_mem_s", [](RunConfig& c, const std::string& v, int l) { c.afe.encoder.tau_mem_s = to_double(v, l); }},
      {"encoder.threshold", [](RunConfig& c, const std::string& v, int l) { c.afe.encoder.threshold = to_double(v, l); }},
      {"encoder.max_events_per_bin", [](RunConfig& c, const std::string& v, int l) { c.afe.encoder.max_events_per_bin = static_cast<int>(to_int(v, l)); }},
      {"synnet.hidden_widths", [](RunConfig& c, const std::string& v, int l) { c.synnet.hidden_widths = to_int_list(v, l); }},
      {"synnet.tau_counts", [](RunConfig& c, const std::string& v, int l) { c.synnet.tau_counts = to_int_list(v, l); }},
      {"synnet.num_inputs", [](RunConfig& c, const std::string& v, int l) { c.synnet.num_inputs = static_cast<int>(to_int(v, l)); }},
      {"synnet.num_classes", [](RunConfig& c, const std::string& v, int l) { c.synnet.num_classes = static_cast<int>(to_int(v, l)); }},
      {"synnet.dt_s", [](RunConfig& c, const std::string& v, int l) { c.synnet.dt_s = to_double(v, l); }},
      {"synnet.tau_mem_s", [](RunConfig& c, const std::string& v, int l) { c.synnet.tau_mem_s = to_double(v, l); }},
      {"quant.threshold_headroom", [](RunConfig& c, const std::string& v, int l) { c.quant.threshold_headroom = to_double(v, l); }},
      {"energy.idle_power_w", [](RunConfig& c, const std::string& v, int l) { c.energy.idle_power_w = to_double(v, l); }},
      {"energy.energy_per_synop_j", [](RunConfig& c, const std::string& v, int l) { c.energy.energy_per_synop_j = to_double(v, l); }},
      {"energy.energy_per_neuron_update_j", [](RunConfig& c, const std::string& v, int l) { c.energy.energy_per_neuron_update_j = to_double(v, l); }},
      {"energy.clock_hz", [](RunConfig& c, const std::string& v, int l) { c.energy.clock_hz = to_double(v, l); }},
      {"energy.per_step_cost_cycles", [](RunConfig& c, const std::string& v, int l) { c.per_step_cost_cycles = to_int(v, l); }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      static const char* kSections[] = {"afe", "encoder", "synnet", "quant", "energy"};
      if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
        throw ParseError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError("key '" + key + "' outside a section", line_no);
    const auto it = setters().find(section + "." + key);
    if (it == setters().end()) {
      throw ParseError("unknown key '" + key + "' in [" + section + "]", line_no);
    }
    it->second(cfg, value, line_no);
  }
  cfg.afe.validate();
  cfg.synnet.validate();
  cfg.energy.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_text_file(path));
}

}  // namespace xylosim::config
