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

// xylosim command-line front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xylosim/afe.h"
#include "xylosim/config.h"
#include "xylosim/errors.h"
#include "xylosim/formats.h"
#include "xylosim/loss.h"
#include "xylosim/quant.h"
#include "xylosim/runner.h"
#include "xylosim/snn_core.h"
#include "xylosim/synnet.h"
#include "xylosim/wav.h"

namespace {

using namespace xylosim;

config::RunConfig load_optional_config(const std::string& path) {
  return path.empty() ? config::RunConfig{} : config::load_config(path);
}

std::string join(const std::vector<std::uint64_t>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  return os.str();
}

struct EncodeArgs {
  std::string in, out, config;
  std::optional<int> gain_db;
};

int run_encode(const EncodeArgs& a) {
  config::RunConfig cfg = load_optional_config(a.config);
  if (a.gain_db) cfg.afe.gain_db = afe::gain_from_db(*a.gain_db);
  const afe::AudioBuffer audio = io::read_wav(a.in);
  const EventRaster raster = afe::encode_audio(audio, cfg.afe);
  io::save_evt_csv(a.out, raster);
  std::cout << "bins=" << raster.num_bins << " channels=" << raster.num_channels
            << " events=" << raster.total() << '\n';
  return 0;
}

struct BuildArgs {
  std::string out, config, tone_bands;
  std::uint64_t seed = 0;
};

int run_build(const BuildArgs& a) {
  const config::RunConfig cfg = load_optional_config(a.config);
  if (!a.tone_bands.empty()) {
    std::vector<int> bands;
    std::istringstream is(a.tone_bands);
    std::string item;
    while (std::getline(is, item, ',')) bands.push_back(std::stoi(item));
    const snn::QuantNetwork net = runner::tone_detector_network(bands, cfg.afe.num_bands);
    io::save_qnet(a.out, net);
    std::cout << "wrote qnet classes=" << net.num_classes() << '\n';
    return 0;
  }
  const synnet::FloatNetwork net = synnet::build_synnet(cfg.synnet, a.seed);
  io::save_fnet(a.out, net);
  std::cout << "wrote fnet layers=" << net.num_layers() << '\n';
  return 0;
}

struct QuantizeArgs {
  std::string in, out, report, config;
};

int run_quantize(const QuantizeArgs& a) {
  const config::RunConfig cfg = load_optional_config(a.config);
  const quant::QuantResult r = quant::quantize_network(io::load_fnet(a.in), cfg.quant);
  io::save_qnet(a.out, r.network);
  if (!a.report.empty()) io::write_text_file(a.report, io::quant_report_to_string(r.report));
  for (std::size_t i = 0; i < r.report.layers.size(); ++i) {
    std::cout << "layer=" << i << " scale=" << r.report.layers[i].scale
              << " mse=" << r.report.layers[i].mse << '\n';
  }
  return 0;
}

struct InferArgs {
  std::string net, raster, audio, traces, config, mode = "accelerated";
};

int run_infer(const InferArgs& a) {
  const config::RunConfig cfg = load_optional_config(a.config);
  const snn::QuantNetwork net = io::load_qnet(a.net);
  EventRaster raster;
  if (!a.raster.empty()) {
    raster = io::load_evt_csv(a.raster);
  } else if (!a.audio.empty()) {
    raster = afe::encode_audio(io::read_wav(a.audio), cfg.afe);
  } else {
    throw ConfigError("infer needs --raster or --audio");
  }
  snn::InferenceReport report = snn::run_raster(net, raster, !a.traces.empty());
  runner::attach_energy(report, cfg.energy, cfg.per_step_cost_cycles, net.dt_s);
  const double latency =
      runner::simulate_latency(report.simulated_steps, runner::latency_mode_from_string(a.mode),
                               cfg.energy, cfg.per_step_cost_cycles, net.dt_s);
  if (!a.traces.empty()) {
    std::ofstream out(a.traces, std::ios::binary);
    if (!out) throw IoError("cannot write " + a.traces);
    io::write_traces_csv(out, report);
  }
  std::cout << "decision=" << report.decision << '\n'
            << "class_spike_counts=" << join(report.class_spike_counts) << '\n'
            << "syn_ops=" << report.telemetry.syn_ops << '\n'
            << "neuron_updates=" << report.telemetry.neuron_updates << '\n'
            << "spikes=" << report.telemetry.spikes_emitted << '\n'
            << "steps=" << report.simulated_steps << '\n'
            << "latency_s=" << latency << '\n'
            << "dynamic_energy_j=" << report.estimated_dynamic_energy_j << '\n'
            << "active_energy_j=" << report.estimated_active_energy_j << '\n';
  return 0;
}

struct EvalArgs {
  std::string net, manifest, config, split = "test", confusion;
  int threads = 1;
  bool carry_state = false;
};

int run_eval(const EvalArgs& a) {
  const config::RunConfig cfg = load_optional_config(a.config);
  const snn::QuantNetwork net = io::load_qnet(a.net);
  const runner::Manifest manifest = runner::load_manifest(a.manifest, net.num_classes());
  runner::EvalOptions options;
  options.num_threads = a.threads;
  options.carry_state = a.carry_state;
  const runner::EvalResult r = runner::evaluate(net, manifest, cfg.afe,
                                                runner::split_from_string(a.split), options);
  if (r.accuracy_defined) {
    std::cout << "accuracy=" << r.accuracy << '\n';
  } else {
    std::cout << "accuracy=nan undefined=1\n";
  }
  std::cout << "samples=" << r.total << " correct=" << r.correct
            << " syn_ops=" << r.telemetry.syn_ops << '\n';
  if (!a.confusion.empty()) io::write_text_file(a.confusion, runner::confusion_to_csv(r));
  return 0;
}

struct BenchArgs {
  std::string config, net;
  double seconds = 2.0;
};

int run_bench(const BenchArgs& a) {
  const config::RunConfig cfg = load_optional_config(a.config);
  runner::BenchmarkWorkload w = runner::benchmark_workload(cfg.afe);
  if (!a.net.empty()) w.network = io::load_qnet(a.net);
  double syn_ops = 0.0;
  double updates = 0.0;
  for (const EventRaster& r : w.rasters) {
    const snn::InferenceReport rep = snn::run_raster(w.network, r);
    syn_ops += static_cast<double>(rep.telemetry.syn_ops);
    updates += static_cast<double>(rep.telemetry.neuron_updates);
  }
  const double n = static_cast<double>(w.rasters.size());
  snn::StepTelemetry mean;
  mean.syn_ops = static_cast<std::uint64_t>(std::llround(syn_ops / n));
  mean.neuron_updates = static_cast<std::uint64_t>(std::llround(updates / n));
  const double latency = runner::simulate_latency(
      w.rasters.front().num_bins, runner::LatencyMode::kAccelerated, cfg.energy,
      cfg.per_step_cost_cycles, w.network.dt_s);
  const runner::EnergyBreakdown e = runner::estimate_energy(mean, cfg.energy, latency);
  const runner::ThroughputResult t = runner::measure_throughput(w.network, w.rasters, a.seconds);
  std::cout << "samples_per_second=" << t.samples_per_second << '\n'
            << "realtime_factor=" << t.realtime_factor << '\n'
            << "mean_syn_ops=" << syn_ops / n << '\n'
            << "accelerated_latency_s=" << latency << '\n'
            << "idle_energy_j=" << e.idle_j << '\n'
            << "dynamic_energy_j=" << e.dynamic_j << '\n'
            << "active_energy_j=" << e.active_j << '\n'
            << "active_power_w=" << e.active_power_w() << '\n';
  return 0;
}

struct LossArgs {
  std::string traces;
  int target = 0;
  double dt_ms = 10.0, window_ms = 100.0, g = 1.5, wl = 1.0, scale = 1.0;
};

int run_loss(const LossArgs& a) {
  std::ifstream in(a.traces, std::ios::binary);
  if (!in) throw IoError("cannot open " + a.traces);
  loss::TraceMatrix m = io::read_traces_csv(in, a.dt_ms / 1000.0);
  for (double& v : m.values) v /= a.scale;
  loss::PeakLossParams p;
  p.window_s = a.window_ms / 1000.0;
  p.target_peak = a.g;
  p.off_target_weight = a.wl;
  const loss::PeakLossTerms terms = loss::peak_loss_terms(m, a.target, p);
  std::cout.precision(17);
  std::cout << "loss=" << terms.total() << '\n'
            << "target_term=" << terms.target << '\n'
            << "off_target_term=" << terms.off_target << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bit-accurate Xylo-style audio SNN pipeline simulator"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode a WAV file into an evt-csv raster");
  encode->add_option("--in", enc.in, "Input mono WAV")->required();
  encode->add_option("--out", enc.out, "Output evt-csv")->required();
  encode->add_option("--config,--afe", enc.config, "Configuration file");
  encode->add_option("--gain-db", enc.gain_db, "LNA gain override (0, 6, 12)");

  BuildArgs bld;
  auto* build = app.add_subcommand("build-net", "Build a float SynNet (fnet) or a tone-detector qnet");
  build->add_option("--out", bld.out, "Output file")->required();
  build->add_option("--config", bld.config, "Configuration file");
  build->add_option("--seed", bld.seed, "Weight initialisation seed");
  build->add_option("--tone-detector", bld.tone_bands,
                    "Comma-separated band per class; writes a qnet");

  QuantizeArgs qa;
  auto* quantize = app.add_subcommand("quantize", "Quantize an fnet into a qnet");
  quantize->add_option("--in", qa.in, "Input fnet")->required();
  quantize->add_option("--out", qa.out, "Output qnet")->required();
  quantize->add_option("--report", qa.report, "Quantization report (JSON)");
  quantize->add_option("--config", qa.config, "Configuration file");

  InferArgs inf;
  auto* infer = app.add_subcommand("infer", "Classify one raster or WAV file");
  infer->add_option("--net", inf.net, "qnet model")->required();
  auto* raster_opt = infer->add_option("--raster", inf.raster, "evt-csv input");
  auto* audio_opt = infer->add_option("--audio", inf.audio, "WAV input");
  raster_opt->excludes(audio_opt);
  infer->add_option("--traces", inf.traces, "Write readout v_mem traces CSV");
  infer->add_option("--config,--afe", inf.config, "Configuration file");
  infer->add_option("--mode", inf.mode, "Latency mode: accelerated or realtime")
      ->check(CLI::IsMember({"accelerated", "realtime"}));

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a qnet over a manifest split");
  eval->add_option("--net", ev.net, "qnet model")->required();
  eval->add_option("--manifest", ev.manifest, "Manifest CSV")->required();
  eval->add_option("--afe,--config", ev.config, "Configuration file");
  eval->add_option("--split", ev.split, "train, val or test");
  eval->add_option("--threads", ev.threads, "Worker threads")->check(CLI::PositiveNumber);
  eval->add_flag("--carry-state", ev.carry_state, "Stream the split as one continuous signal");
  eval->add_option("--confusion", ev.confusion, "Write confusion matrix CSV");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Throughput and energy estimate on the benchmark workload");
  bench->add_option("--config", bn.config, "Configuration file");
  bench->add_option("--net", bn.net, "Use this qnet instead of the seed-0 SynNet");
  bench->add_option("--seconds", bn.seconds, "Minimum wall time")->check(CLI::PositiveNumber);

  LossArgs ls;
  auto* loss_eval = app.add_subcommand("loss-eval", "PeakLoss of a traces CSV");
  loss_eval->add_option("--traces", ls.traces, "Traces CSV (step,channel,v_mem)")->required();
  loss_eval->add_option("--target", ls.target, "Target class")->required();
  loss_eval->add_option("--dt-ms", ls.dt_ms, "Step length");
  loss_eval->add_option("--window-ms", ls.window_ms, "Window after the peak");
  loss_eval->add_option("--g", ls.g, "Target peak value");
  loss_eval->add_option("--wl", ls.wl, "Off-target weight");
  loss_eval->add_option("--scale", ls.scale, "Divide trace values by this first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*encode) return run_encode(enc);
    if (*build) return run_build(bld);
    if (*quantize) return run_quantize(qa);
    if (*infer) return run_infer(inf);
    if (*eval) return run_eval(ev);
    if (*bench) return run_bench(bn);
    if (*loss_eval) return run_loss(ls);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Exception: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
