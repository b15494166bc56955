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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "generators.h"
#include "oracles.h"
#include "temp_dir.h"
#include "xylosim/afe.h"
#include "xylosim/formats.h"
#include "xylosim/loss.h"
#include "xylosim/quant.h"
#include "xylosim/runner.h"
#include "xylosim/snn_core.h"
#include "xylosim/synnet.h"
#include "xylosim/wav.h"

namespace xylosim {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome filterbank_fidelity() {
  const afe::AfeConfig cfg;
  const afe::FilterbankSpec spec = afe::design_filterbank(cfg);
  const double nyquist = cfg.sample_rate_hz / 2.0;
  double worst_peak = 0.0, worst_bw = 0.0;
  int checked = 0;
  for (int k = 0; k < spec.num_bands(); ++k) {
    const double fc = spec.center_hz[k];
    if (fc >= 0.4 * nyquist) continue;
    const auto m = oracle::measure_band(spec.sections[k], cfg.sample_rate_hz, fc / 3.0,
                                        std::min(3.0 * fc, nyquist - 1.0), 200001);
    worst_peak = std::max(worst_peak, std::abs(m.peak_hz / fc - 1.0));
    worst_bw = std::max(worst_bw, std::abs(m.bandwidth_hz() / (fc / cfg.q_factor) - 1.0));
    ++checked;
  }
  return {checked > 0 && worst_peak <= 0.05 && worst_bw <= 0.10,
          fmt("bands=%d max_peak_err=%.4f%% max_bw_err=%.4f%%", checked, 100 * worst_peak,
              100 * worst_bw)};
}

Outcome decay_fidelity() {
  const double v0 = 20000.0;
  double worst = 0.0;  // deviation / allowance
  for (int dash = 1; dash <= 7; ++dash) {
    std::int16_t v = static_cast<std::int16_t>(v0);
    for (int k = 1; k <= 50; ++k) {
      v = snn::decay16(v, dash);
      const double ideal = v0 * std::pow(1.0 - std::ldexp(1.0, -dash), k);
      const double allow = std::max(2.0 * k, 0.02 * ideal);
      worst = std::max(worst, std::abs(v - ideal) / allow);
    }
  }
  return {worst <= 1.0, fmt("worst deviation %.3f of allowance", worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<int> depth(1, 3), inputs(1, 4), bins(1, 20), maxc(0, 15);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const snn::QuantNetwork net = testing::random_net(rng, inputs(rng), 4, depth(rng));
    const EventRaster r = testing::random_raster(rng, net.num_inputs(), bins(rng), maxc(rng));
    const snn::InferenceReport rep = snn::run_raster(net, r, true);
    const auto ref = oracle::ref_run(net, r);
    bool same = static_cast<long long>(rep.telemetry.syn_ops) == ref.syn_ops &&
                static_cast<long long>(rep.telemetry.spikes_emitted) == ref.spikes &&
                rep.decision == oracle::ref_argmax(ref.counts);
    for (std::size_t c = 0; c < ref.counts.size(); ++c) {
      same = same && static_cast<long long>(rep.class_spike_counts[c]) == ref.counts[c];
    }
    for (int t = 0; t < r.num_bins; ++t) {
      for (int c = 0; c < net.num_classes(); ++c) {
        same = same && rep.readout_traces[t * net.num_classes() + c] == ref.readout_v[t][c];
      }
    }
    mismatches += !same;
  }
  return {mismatches == 0, fmt("instances=1000 mismatches=%d", mismatches)};
}

std::vector<std::size_t> random_cuts(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pos(0, n), count(0, 12);
  std::vector<std::size_t> cuts{0, n};
  for (std::size_t i = count(rng); i > 0; --i) cuts.push_back(pos(rng));
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

Outcome streaming_invariance() {
  const afe::AfeConfig cfg;
  const afe::AudioBuffer audio = runner::make_noise(0.6, 0.5, 17);
  const EventRaster whole = afe::encode_audio(audio, cfg);
  const runner::BenchmarkWorkload w = runner::benchmark_workload(cfg);
  const EventRaster& r = w.rasters.front();
  const snn::InferenceReport single = snn::run_raster(w.network, r, true);

  std::mt19937_64 rng(100);
  int enc_bad = 0, net_bad = 0;
  const std::span<const double> all(audio.samples);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cuts = random_cuts(rng, all.size());
    afe::AfeEncoder enc(cfg);
    EventRaster chunked(cfg.num_bands, 0, cfg.bin_dt_s);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      chunked.append(enc.push(all.subspan(cuts[i], cuts[i + 1] - cuts[i])));
    }
    enc_bad += !(chunked == whole);

    const auto bin_cuts = random_cuts(rng, static_cast<std::size_t>(r.num_bins));
    snn::NetworkRunner runner(w.network, true);
    for (std::size_t i = 0; i + 1 < bin_cuts.size(); ++i) {
      runner.feed(r.slice(static_cast<int>(bin_cuts[i]),
                          static_cast<int>(bin_cuts[i + 1] - bin_cuts[i])));
    }
    net_bad += !(runner.report() == single);
  }
  return {enc_bad == 0 && net_bad == 0 && whole.total() > 0,
          fmt("partitions=100 encoder_mismatch=%d network_mismatch=%d", enc_bad, net_bad)};
}

loss::TraceMatrix traces(const std::vector<std::vector<double>>& ch, double dt) {
  loss::TraceMatrix m;
  m.num_channels = static_cast<int>(ch.size());
  m.num_steps = static_cast<int>(ch[0].size());
  m.dt_s = dt;
  for (int t = 0; t < m.num_steps; ++t)
    for (const auto& c : ch) m.values.push_back(c[t]);
  return m;
}

Outcome peak_loss_correctness() {
  const loss::PeakLossParams worked{0.020, 1.5, 1.0};
  const double ex = loss::peak_loss(traces({{0, 2, 1}, {1, 0, 0}}, 0.010), 0, worked);
  double worst = std::abs(ex - 1.0 / 3.0) / (1.0 / 3.0);
  const bool example_ok = worst <= 1e-12;

  std::mt19937_64 rng(500);
  std::normal_distribution<double> nd(0.0, 2.0);
  std::uniform_int_distribution<int> steps(1, 80), chans(2, 8), win(1, 30);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::vector<double>> ch(chans(rng), std::vector<double>(steps(rng)));
    for (auto& c : ch)
      for (double& v : c) v = nd(rng);
    const int y = static_cast<int>(rng() % ch.size());
    const loss::PeakLossParams p{0.010 * win(rng), nd(rng), std::abs(nd(rng))};
    const double got = loss::peak_loss(traces(ch, 0.010), y, p);
    const double want =
        oracle::ref_peak_loss(ch, y, 0.010, p.window_s, p.target_peak, p.off_target_weight);
    const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
    worst = std::max(worst, rel);
  }
  return {example_ok && worst <= 1e-12,
          fmt("worked=%.15f random=500 max_rel_err=%.2e", ex, worst)};
}

Outcome quantization_behavior() {
  double worst = 0.0;  // |w - q/s| * s, must stay <= 0.5
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const synnet::FloatNetwork net = synnet::build_synnet(synnet::SynNetSpec{}, seed);
    const quant::QuantResult q = quant::quantize_network(net);
    for (int l = 0; l < net.num_layers(); ++l) {
      const double s = q.report.layers[l].scale;
      for (std::size_t i = 0; i < net.layer(l).weights.size(); ++i) {
        worst = std::max(worst, std::abs(net.layer(l).weights[i] * s -
                                         static_cast<double>(q.network.layer(l).weights[i])));
      }
    }
  }

  std::mt19937_64 rng(123);
  EventRaster probe(8, 50, 0.01);
  std::uniform_int_distribution<int> c(0, 3);
  for (auto& x : probe.counts) x = static_cast<EventCount>(c(rng));
  synnet::SynNetSpec spec;
  spec.hidden_widths = {6};
  spec.tau_counts = {2};
  spec.num_inputs = 8;
  spec.num_classes = 2;
  int trials = 0, agree = 0;
  for (std::uint64_t seed = 0; trials < 200 && seed < 100000; ++seed) {
    const synnet::FloatNetwork fnet = synnet::build_synnet(spec, seed);
    const auto fc = oracle::float_run(fnet, probe);
    const double hi = std::max(fc[0], fc[1]);
    if (hi <= 0.0 || std::abs(fc[0] - fc[1]) / hi <= 0.2) continue;
    ++trials;
    const int float_decision = fc[1] > fc[0] ? 1 : 0;
    agree += snn::run_raster(quant::quantize_network(fnet).network, probe).decision ==
             float_decision;
  }
  return {worst <= 0.5 + 1e-12 && trials == 200 && agree >= 190,
          fmt("max_err=%.4f/scale argmax_agree=%d/%d", worst, agree, trials)};
}

Outcome end_to_end_tones() {
  const afe::AfeConfig cfg;
  testing::TempDir dir;
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
  std::string manifest = "path,label,split\n";
  for (int cls = 0; cls < 4; ++cls) {
    for (int i = 0; i < 10; ++i) {
      const std::string name = fmt("tone_c%d_%02d.wav", cls, i);
      io::write_wav(dir / name,
                    runner::make_tone(cfg.center_frequency(cls), 0.5, 1.0, 48000.0, phase(rng)));
      manifest += name + "," + std::to_string(cls) + ",test\n";
    }
  }
  io::write_text_file(dir / "manifest.csv", manifest);
  const runner::Manifest m = runner::load_manifest(dir / "manifest.csv", 4);
  const runner::EvalResult r = runner::evaluate(runner::tone_detector_network({0, 1, 2, 3}), m,
                                                cfg, runner::Split::kTest);
  return {r.total == 40 && r.accuracy_defined && r.correct == 40,
          fmt("correct=%d/%d accuracy=%.4f", r.correct, r.total, r.accuracy)};
}

Outcome energy_calibration() {
  const runner::BenchmarkWorkload w = runner::benchmark_workload();
  snn::StepTelemetry sum;
  std::int64_t bins = 0;
  for (const EventRaster& r : w.rasters) {
    sum += snn::run_raster(w.network, r).telemetry;
    bins += r.num_bins;
  }
  const double n = static_cast<double>(w.rasters.size());
  const runner::EnergyModelParams params;
  const double calibrated = runner::calibrate_energy_per_synop(
      static_cast<double>(sum.syn_ops) / n, static_cast<double>(sum.neuron_updates) / n,
      params, 28.4e-6);
  const double latency = runner::simulate_latency(bins / static_cast<std::int64_t>(n),
                                                  runner::LatencyMode::kAccelerated, params);
  snn::StepTelemetry mean;
  mean.syn_ops = sum.syn_ops / w.rasters.size();
  mean.neuron_updates = sum.neuron_updates / w.rasters.size();
  const runner::EnergyBreakdown e = runner::estimate_energy(mean, params, latency);
  const double dyn_err = std::abs(e.dynamic_j / 28.4e-6 - 1.0);
  const double act_err = std::abs(e.active_j / 57.6e-6 - 1.0);
  const double const_err = std::abs(calibrated / params.energy_per_synop_j - 1.0);
  return {dyn_err <= 0.02 && act_err <= 0.02 && const_err <= 1e-6 &&
              std::abs(latency - 0.084) < 1e-9,
          fmt("latency=%.1fms idle=%.2fuJ dynamic=%.2fuJ active=%.2fuJ (err %.2f%%, %.2f%%)",
              latency * 1e3, e.idle_j * 1e6, e.dynamic_j * 1e6, e.active_j * 1e6,
              100 * dyn_err, 100 * act_err)};
}

Outcome performance() {
  const runner::BenchmarkWorkload w = runner::benchmark_workload();
  const runner::ThroughputResult t = runner::measure_throughput(w.network, w.rasters, 1.0);
  return {t.samples_per_second >= 100.0,
          fmt("%.0f samples/s single-threaded (%.0fx real time)", t.samples_per_second,
              t.realtime_factor)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double time_limit_s;  // <= 0: no limit
  bool soft;
};

}  // namespace
}  // namespace xylosim

int main() {
  using namespace xylosim;
  const Criterion criteria[] = {
      {"filterbank_fidelity", filterbank_fidelity, 5.0, false},
      {"decay_fidelity", decay_fidelity, 1.0, false},
      {"oracle_equivalence", oracle_equivalence, 30.0, false},
      {"streaming_invariance", streaming_invariance, 30.0, false},
      {"peak_loss_correctness", peak_loss_correctness, 0.0, false},
      {"quantization_behavior", quantization_behavior, 0.0, false},
      {"end_to_end_tone_classification", end_to_end_tones, 0.0, false},
      {"energy_latency_calibration", energy_calibration, 0.0, false},
      {"performance", performance, 0.0, true},
  };
  int hard_failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += fmt(" [over %.0f s limit]", c.time_limit_s);
    }
    if (!o.pass && !c.soft) ++hard_failures;
    std::printf("%s %-32s %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs, c.soft ? " [soft target]" : "");
    std::fflush(stdout);
  }
  std::printf("%d hard failure(s)\n", hard_failures);
  return hard_failures == 0 ? 0 : 1;
}
