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

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"
#include "xylosim/errors.h"

namespace xylosim::quant {
namespace {

synnet::FloatLayer float_layer(int rows, int cols, double tau = 0.02) {
  synnet::FloatLayer l;
  l.rows = rows;
  l.cols = cols;
  l.weights.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  l.tau_syn_s.assign(rows, tau);
  l.tau_mem_s.assign(rows, 0.02);
  l.threshold.assign(rows, 1.0);
  return l;
}

TEST(DashFromTau, Examples) {
  EXPECT_EQ(dash_from_tau(0.020, 0.010), 1);
  EXPECT_EQ(dash_from_tau(0.010, 0.010), 0);
  EXPECT_EQ(dash_from_tau(1.280, 0.010), 7);
  EXPECT_EQ(dash_from_tau(1e6, 0.010), 15);
  EXPECT_EQ(dash_from_tau(0.006, 0.010), 0);
  EXPECT_THROW(dash_from_tau(0.004, 0.010), ConfigError);
}

TEST(DashFromTau, IsMonotone) {
  int prev = 0;
  for (double tau = 0.005; tau < 1000.0; tau *= 1.01) {
    const int d = dash_from_tau(tau, 0.01);
    EXPECT_GE(d, prev);
    prev = d;
  }
}

TEST(RoundHalfAway, Ties) {
  EXPECT_EQ(round_half_away(2.5), 3);
  EXPECT_EQ(round_half_away(-2.5), -3);
  EXPECT_EQ(round_half_away(0.49), 0);
}

TEST(QuantizeNetwork, MaxWeightMapsTo127) {
  synnet::FloatNetwork net;
  net.readout = float_layer(1, 2);
  net.readout.weights = {0.5, -0.25};
  const QuantResult r = quantize_network(net);
  EXPECT_EQ(r.network.readout.weights[0], 127);
  EXPECT_EQ(r.network.readout.weights[1], -64);  // -63.5 rounds away from zero
  EXPECT_DOUBLE_EQ(r.report.layers[0].scale, 254.0);
  EXPECT_EQ(r.network.readout.threshold[0], 254);
  EXPECT_EQ(r.network.readout.syn_dash[0], 1);
  EXPECT_EQ(r.network.readout.mem_dash[0], 1);
}

TEST(QuantizeNetwork, AllZeroLayerUsesUnitScale) {
  synnet::FloatNetwork net;
  net.readout = float_layer(2, 3);
  net.readout.threshold = {3.4, 0.2};
  const QuantResult r = quantize_network(net);
  EXPECT_DOUBLE_EQ(r.report.layers[0].scale, 1.0);
  for (auto w : r.network.readout.weights) EXPECT_EQ(w, 0);
  EXPECT_EQ(r.network.readout.threshold[0], 3);
  EXPECT_EQ(r.network.readout.threshold[1], 1);  // clamped up to 1
}

TEST(QuantizeNetwork, HeadroomScalesThresholds) {
  synnet::FloatNetwork net;
  net.readout = float_layer(1, 1);
  net.readout.weights = {1.0};
  QuantOptions opt;
  opt.threshold_headroom = 2.0;
  EXPECT_EQ(quantize_network(net, opt).network.readout.threshold[0], 254);
  opt.threshold_headroom = 1000.0;
  EXPECT_EQ(quantize_network(net, opt).network.readout.threshold[0], 32767);
}

TEST(QuantizeNetwork, ExactGridReproducesFloats) {
  synnet::FloatNetwork net;
  net.readout = float_layer(3, 4);
  const double step = 0.8 / 127.0;
  int k = -127;
  for (double& w : net.readout.weights) {
    w = k * step;
    k += 19;
    if (k > 127) k -= 254;
  }
  net.readout.weights[5] = 127 * step;
  const QuantResult r = quantize_network(net);
  const double s = r.report.layers[0].scale;
  for (std::size_t i = 0; i < net.readout.weights.size(); ++i) {
    EXPECT_NEAR(r.network.readout.weights[i] / s, net.readout.weights[i], 1e-15);
  }
  EXPECT_LT(r.report.layers[0].mse, 1e-30);
}

TEST(QuantizeNetwork, RoundTripErrorWithinHalfStep) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const synnet::FloatNetwork net = synnet::build_synnet(synnet::SynNetSpec{}, seed);
    const QuantResult r = quantize_network(net);
    for (int l = 0; l < net.num_layers(); ++l) {
      const double s = r.report.layers[l].scale;
      EXPECT_GT(s, 0.0);
      for (std::size_t i = 0; i < net.layer(l).weights.size(); ++i) {
        const double wq = r.network.layer(l).weights[i];
        ASSERT_LE(std::abs(net.layer(l).weights[i] - wq / s), 0.5 / s + 1e-15);
      }
    }
  }
}

TEST(QuantizeNetwork, ReportsDashTable) {
  const QuantResult r = quantize_network(synnet::build_synnet(synnet::SynNetSpec{}, 0));
  ASSERT_EQ(r.report.dash_table.size(), 7u);  // 20 ms .. 1280 ms
  for (std::size_t i = 0; i < r.report.dash_table.size(); ++i) {
    EXPECT_EQ(r.report.dash_table[i].second, static_cast<int>(i) + 1);
  }
}

TEST(QuantizeNetwork, RejectsNonFiniteWeights) {
  synnet::FloatNetwork net;
  net.readout = float_layer(1, 2);
  net.readout.weights = {0.1, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(quantize_network(net), NumericalError);
  net.readout.weights = {0.1, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(quantize_network(net), NumericalError);
}

TEST(QuantizeNetwork, PreservesDecisionsOnHighMarginToyNets) {
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
    agree += snn::run_raster(quantize_network(fnet).network, probe).decision == float_decision;
  }
  ASSERT_EQ(trials, 200);
  EXPECT_GE(agree, 190) << agree << "/200";
}

}  // namespace
}  // namespace xylosim::quant
