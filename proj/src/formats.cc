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

#include "xylosim/formats.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "xylosim/errors.h"

namespace xylosim::io {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

long long parse_int(const std::string& s, int line) {
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("expected integer, got '" + s + "'", line);
  }
  return v;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \r", used) != std::string::npos) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("expected number, got '" + s + "'", line);
  }
}

// Parses "key=value" tokens of a comment header line.
std::map<std::string, std::string> header_fields(const std::string& line) {
  std::map<std::string, std::string> fields;
  std::istringstream is(line.substr(1));
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
}

template <typename T>
std::vector<T> int_array(const json& j, const char* key, long long lo, long long hi) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParseError(std::string("missing integer array '") + key + "'", 0);
  }
  std::vector<T> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number_integer()) {
      throw ParseError(std::string("'") + key + "' must hold integers only", 0);
    }
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
      throw ValidationError(std::string("'") + key + "' value " + std::to_string(x) +
                            " out of range");
    }
    out.push_back(static_cast<T>(x));
  }
  return out;
}

int int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ParseError(std::string("missing integer field '") + key + "'", 0);
  }
  return j.at(key).get<int>();
}

std::vector<double> real_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParseError(std::string("missing array '") + key + "'", 0);
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ParseError(std::string("'") + key + "' must hold numbers", 0);
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

void write_evt_csv(std::ostream& out, const EventRaster& raster) {
  out << "# channels=" << raster.num_channels
      << " dt_ms=" << format_number(raster.bin_dt_s * 1000.0) << '\n';
  out << "# bins=" << raster.num_bins << '\n';
  for (int b = 0; b < raster.num_bins; ++b) {
    for (int c = 0; c < raster.num_channels; ++c) {
      if (const EventCount n = raster.at(b, c); n != 0) {
        out << b << ',' << c << ',' << n << '\n';
      }
    }
  }
}

EventRaster read_evt_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty evt-csv input", 1);
  ++line_no;
  if (line.empty() || line[0] != '#') throw ParseError("missing evt-csv header", line_no);
  auto fields = header_fields(line);
  if (!fields.contains("channels") || !fields.contains("dt_ms")) {
    throw ParseError("header must carry channels= and dt_ms=", line_no);
  }
  const int channels = static_cast<int>(parse_int(fields["channels"], line_no));
  const double dt_ms = parse_double(fields["dt_ms"], line_no);
  if (channels < 1 || !(dt_ms > 0.0)) throw ParseError("invalid evt-csv header values", line_no);

  int declared_bins = -1;
  struct Cell {
    long long bin, channel, count;
  };
  std::vector<Cell> cells;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto extra = header_fields(line);
      if (extra.contains("bins")) declared_bins = static_cast<int>(parse_int(extra["bins"], line_no));
      continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw ParseError("expected <bin>,<channel>,<count>", line_no);
    Cell cell{parse_int(parts[0], line_no), parse_int(parts[1], line_no),
              parse_int(parts[2], line_no)};
    if (cell.bin < 0 || cell.channel < 0 || cell.channel >= channels || cell.count < 0) {
      throw ParseError("cell out of range", line_no);
    }
    cells.push_back(cell);
  }

  long long bins = 0;
  for (const auto& c : cells) bins = std::max(bins, c.bin + 1);
  if (declared_bins >= 0) {
    if (declared_bins < bins) throw ParseError("cell beyond declared bin count", line_no);
    bins = declared_bins;
  }
  EventRaster raster(channels, static_cast<int>(bins), dt_ms / 1000.0);
  for (const auto& c : cells) {
    raster.at(static_cast<int>(c.bin), static_cast<int>(c.channel)) =
        static_cast<EventCount>(c.count);
  }
  return raster;
}

void save_evt_csv(const std::filesystem::path& path, const EventRaster& raster) {
  std::ostringstream os;
  write_evt_csv(os, raster);
  write_text_file(path, os.str());
}

EventRaster load_evt_csv(const std::filesystem::path& path) {
  std::istringstream is(read_text_file(path));
  return read_evt_csv(is);
}

std::string qnet_to_string(const snn::QuantNetwork& net) {
  const double dt_ms = net.dt_s * 1000.0;
  if (std::abs(dt_ms - std::round(dt_ms)) > 1e-9) {
    throw ValidationError("qnet requires an integral dt in milliseconds");
  }
  json doc;
  doc["format"] = "qnet";
  doc["version"] = 1;
  doc["dt_ms"] = static_cast<long long>(std::llround(dt_ms));
  doc["layers"] = json::array();
  for (int i = 0; i < net.num_layers(); ++i) {
    const snn::QuantLayer& l = net.layer(i);
    json jl;
    jl["rows"] = l.rows;
    jl["cols"] = l.cols;
    jl["weights"] = std::vector<int>(l.weights.begin(), l.weights.end());
    jl["syn_dash"] = std::vector<int>(l.syn_dash.begin(), l.syn_dash.end());
    jl["mem_dash"] = std::vector<int>(l.mem_dash.begin(), l.mem_dash.end());
    jl["threshold"] = std::vector<int>(l.threshold.begin(), l.threshold.end());
    jl["max_spikes_per_step"] = l.max_spikes_per_step;
    doc["layers"].push_back(jl);
  }
  return doc.dump(1) + "\n";
}

snn::QuantNetwork qnet_from_string(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array() ||
      doc["layers"].empty()) {
    throw ParseError("qnet document needs a non-empty 'layers' array", 0);
  }
  snn::QuantNetwork net;
  net.dt_s = int_field(doc, "dt_ms") / 1000.0;
  const auto& layers = doc["layers"];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json& jl = layers[i];
    snn::QuantLayer l;
    l.rows = int_field(jl, "rows");
    l.cols = int_field(jl, "cols");
    l.weights = int_array<std::int8_t>(jl, "weights", -128, 127);
    l.syn_dash = int_array<std::uint8_t>(jl, "syn_dash", 0, snn::kMaxDash);
    l.mem_dash = int_array<std::uint8_t>(jl, "mem_dash", 0, snn::kMaxDash);
    l.threshold = int_array<std::int16_t>(jl, "threshold", 1, snn::kStateMax);
    l.max_spikes_per_step = int_field(jl, "max_spikes_per_step");
    if (i + 1 < layers.size()) {
      net.hidden_layers.push_back(std::move(l));
    } else {
      net.readout = std::move(l);
    }
  }
  net.validate();
  return net;
}

void save_qnet(const std::filesystem::path& path, const snn::QuantNetwork& net) {
  write_text_file(path, qnet_to_string(net));
}

snn::QuantNetwork load_qnet(const std::filesystem::path& path) {
  return qnet_from_string(read_text_file(path));
}

std::string fnet_to_string(const synnet::FloatNetwork& net) {
  json doc;
  doc["format"] = "fnet";
  doc["version"] = 1;
  doc["dt_s"] = net.dt_s;
  doc["layers"] = json::array();
  for (int i = 0; i < net.num_layers(); ++i) {
    const synnet::FloatLayer& l = net.layer(i);
    doc["layers"].push_back({{"rows", l.rows},
                             {"cols", l.cols},
                             {"weights", l.weights},
                             {"tau_syn_s", l.tau_syn_s},
                             {"tau_mem_s", l.tau_mem_s},
                             {"threshold", l.threshold},
                             {"max_spikes_per_step", l.max_spikes_per_step}});
  }
  return doc.dump(1) + "\n";
}

synnet::FloatNetwork fnet_from_string(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array() ||
      doc["layers"].empty() || !doc.contains("dt_s") || !doc["dt_s"].is_number()) {
    throw ParseError("fnet document needs 'dt_s' and a non-empty 'layers' array", 0);
  }
  synnet::FloatNetwork net;
  net.dt_s = doc["dt_s"].get<double>();
  const auto& layers = doc["layers"];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json& jl = layers[i];
    synnet::FloatLayer l;
    l.rows = int_field(jl, "rows");
    l.cols = int_field(jl, "cols");
    l.weights = real_array(jl, "weights");
    l.tau_syn_s = real_array(jl, "tau_syn_s");
    l.tau_mem_s = real_array(jl, "tau_mem_s");
    l.threshold = real_array(jl, "threshold");
    l.max_spikes_per_step = int_field(jl, "max_spikes_per_step");
    if (i + 1 < layers.size()) {
      net.hidden_layers.push_back(std::move(l));
    } else {
      net.readout = std::move(l);
    }
  }
  net.validate();
  return net;
}

void save_fnet(const std::filesystem::path& path, const synnet::FloatNetwork& net) {
  write_text_file(path, fnet_to_string(net));
}

synnet::FloatNetwork load_fnet(const std::filesystem::path& path) {
  return fnet_from_string(read_text_file(path));
}

std::string quant_report_to_string(const quant::QuantReport& report) {
  json doc;
  doc["format"] = "quant-report";
  doc["layers"] = json::array();
  for (const auto& s : report.layers) {
    doc["layers"].push_back(
        {{"scale", s.scale}, {"max_abs_weight", s.max_abs_weight}, {"mse", s.mse}});
  }
  doc["dash_table"] = json::array();
  for (const auto& [tau, dash] : report.dash_table) {
    doc["dash_table"].push_back({{"tau_s", tau}, {"dash", dash}});
  }
  return doc.dump(1) + "\n";
}

void write_traces_csv(std::ostream& out, const snn::InferenceReport& report) {
  out << "step,channel,v_mem\n";
  const std::size_t classes = report.class_spike_counts.size();
  if (classes == 0) return;
  for (std::size_t i = 0; i < report.readout_traces.size(); ++i) {
    out << i / classes << ',' << i % classes << ',' << report.readout_traces[i] << '\n';
  }
}

loss::TraceMatrix read_traces_csv(std::istream& in, double dt_s) {
  std::string line;
  int line_no = 0;
  struct Row {
    long long step, channel;
    double value;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("step", 0) == 0) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw ParseError("expected step,channel,v_mem", line_no);
    rows.push_back({parse_int(parts[0], line_no), parse_int(parts[1], line_no),
                    parse_double(parts[2], line_no)});
    if (rows.back().step < 0 || rows.back().channel < 0) {
      throw ParseError("negative step or channel", line_no);
    }
  }
  loss::TraceMatrix m;
  m.dt_s = dt_s;
  for (const auto& r : rows) {
    m.num_steps = std::max<int>(m.num_steps, static_cast<int>(r.step + 1));
    m.num_channels = std::max<int>(m.num_channels, static_cast<int>(r.channel + 1));
  }
  m.values.assign(static_cast<std::size_t>(m.num_steps) * m.num_channels, 0.0);
  for (const auto& r : rows) {
    m.values[static_cast<std::size_t>(r.step) * m.num_channels + r.channel] = r.value;
  }
  return m;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace xylosim::io
