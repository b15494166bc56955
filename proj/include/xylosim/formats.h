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

#ifndef XYLOSIM_FORMATS_H_
#define XYLOSIM_FORMATS_H_

// On-disk formats:
//   evt-csv  event rasters, "# channels=<N> dt_ms=<D>" then "<bin>,<ch>,<count>"
//            for every nonzero cell, sorted by bin then channel
//   qnet     quantized network, JSON with integer fields only
//   fnet     float network, JSON
//   traces   "step,channel,v_mem" CSV of readout membrane potentials

#include <filesystem>
#include <iosfwd>
#include <string>

#include "xylosim/loss.h"
#include "xylosim/quant.h"
#include "xylosim/raster.h"
#include "xylosim/snn_core.h"
#include "xylosim/synnet.h"

namespace xylosim::io {

// A second comment line "# bins=<T>" records the raster length so trailing
// empty bins survive; readers fall back to the last nonzero bin without it.
void write_evt_csv(std::ostream& out, const EventRaster& raster);
EventRaster read_evt_csv(std::istream& in);
void save_evt_csv(const std::filesystem::path& path, const EventRaster& raster);
EventRaster load_evt_csv(const std::filesystem::path& path);

std::string qnet_to_string(const snn::QuantNetwork& net);
snn::QuantNetwork qnet_from_string(const std::string& text);
void save_qnet(const std::filesystem::path& path, const snn::QuantNetwork& net);
snn::QuantNetwork load_qnet(const std::filesystem::path& path);

std::string fnet_to_string(const synnet::FloatNetwork& net);
synnet::FloatNetwork fnet_from_string(const std::string& text);
void save_fnet(const std::filesystem::path& path, const synnet::FloatNetwork& net);
synnet::FloatNetwork load_fnet(const std::filesystem::path& path);

std::string quant_report_to_string(const quant::QuantReport& report);

// Readout traces of a report, one row per (step, class).
void write_traces_csv(std::ostream& out, const snn::InferenceReport& report);
// Traces CSV back into a dense matrix with the given step length.
loss::TraceMatrix read_traces_csv(std::istream& in, double dt_s);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace xylosim::io

#endif  // XYLOSIM_FORMATS_H_
