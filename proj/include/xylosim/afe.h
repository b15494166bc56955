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

#ifndef XYLOSIM_AFE_H_
#define XYLOSIM_AFE_H_

// Audio front-end simulation: LNA gain, a constant-Q bank of second-order
// Butterworth band-pass sections, full-wave rectification, one LIF event
// encoder per band and fixed-width temporal binning.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "xylosim/raster.h"

namespace xylosim::afe {

struct AudioBuffer {
  double sample_rate_hz = 48000.0;
  std::vector<double> samples;
};

// The LNA only offers three settings.
enum class GainDb : int { k0 = 0, k6 = 6, k12 = 12 };

// Throws ConfigError for anything other than 0, 6 or 12.
GainDb gain_from_db(int db);
double gain_factor(GainDb gain);

struct LifEncoderConfig {
  double tau_mem_s = 0.1;
  // Calibrated so a full-scale 1 kHz sine at 0 dB gain yields ~100 events/s
  // in its best band (band 8 of the default bank).
  double threshold = 290.0;
  int max_events_per_bin = 15;
};

struct AfeConfig {
  double sample_rate_hz = 48000.0;
  int num_bands = 16;
  double f_low_hz = 40.0;
  double f_high_hz = 16940.0;
  double q_factor = 4.0;
  GainDb gain_db = GainDb::k0;
  double bin_dt_s = 0.010;
  LifEncoderConfig encoder;

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  // Log-uniform centre frequency of band k.
  double center_frequency(int band) const;
};

// One band-pass biquad, normalised so a0 == 1:
//   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct BiquadSection {
  std::array<double, 3> b{};
  std::array<double, 2> a{};

  std::complex<double> response(double f_hz, double sample_rate_hz) const;
  std::array<std::complex<double>, 2> poles() const;
};

struct FilterbankSpec {
  double sample_rate_hz = 48000.0;
  std::vector<BiquadSection> sections;
  std::vector<double> center_hz;

  int num_bands() const { return static_cast<int>(sections.size()); }
};

// Designs one constant-Q band-pass section per band. Each analog prototype
// H(s) = B s / (s^2 + B s + W0^2) is mapped with the bilinear transform; W0 is
// prewarped to the band centre and B is solved so the digital -3 dB edges are
// exactly f_c / Q apart.
FilterbankSpec design_filterbank(const AfeConfig& config);

AudioBuffer apply_gain(const AudioBuffer& audio, GainDb gain);

inline double rectify(double x) { return x < 0.0 ? -x : x; }

// Per-band biquad memory (transposed direct form II).
class FilterbankState {
 public:
  explicit FilterbankState(const FilterbankSpec& spec);

  // Advances every band by one input sample; `out` must hold num_bands values.
  void step(double sample, std::span<double> out);
  std::vector<double> step(double sample);

  void reset();
  int num_bands() const { return static_cast<int>(sections_.size()); }

 private:
  std::vector<BiquadSection> sections_;
  std::vector<double> z1_;
  std::vector<double> z2_;
};

class EncoderState {
 public:
  EncoderState(const LifEncoderConfig& config, int num_channels,
               double sample_rate_hz);

  // One audio-rate LIF update per channel. Writes the number of events
  // emitted this step to `events`.
  void step(std::span<const double> rectified, std::span<EventCount> events);

  std::span<const double> membrane() const { return v_; }
  void reset();

 private:
  double retention_;
  double threshold_;
  EventCount max_events_;
  std::vector<double> v_;
};

// Number of audio steps per bin; throws ConfigError if fs * bin_dt is not
// within 1e-6 of an integer.
int steps_per_bin(double bin_dt_s, double sample_rate_hz);

// Bins a [step][channel] event stream. Trailing partial bins are dropped and
// per-bin counts saturate at max_events_per_bin.
EventRaster bin_events(std::span<const EventCount> events, int num_channels,
                       double bin_dt_s, double sample_rate_hz,
                       int max_events_per_bin);

// Streaming encoder. Carries filter, membrane and partial-bin state across
// push() calls so any chunking of a stream produces the same raster.
class AfeEncoder {
 public:
  explicit AfeEncoder(const AfeConfig& config);

  // Consumes raw (pre-gain) samples and returns the bins completed by them.
  EventRaster push(std::span<const double> samples);

  void reset();
  const AfeConfig& config() const { return config_; }
  const FilterbankSpec& filterbank() const { return spec_; }

 private:
  AfeConfig config_;
  FilterbankSpec spec_;
  FilterbankState filters_;
  EncoderState encoder_;
  double gain_;
  int steps_per_bin_;
  int steps_in_bin_ = 0;
  std::vector<EventCount> pending_;
  std::vector<double> band_out_;
  std::vector<EventCount> step_events_;
};

// gain -> filterbank -> rectify -> LIF encode -> bin, from a zero state.
// Throws ConfigError if the audio's sample rate differs from the config.
EventRaster encode_audio(const AudioBuffer& audio, const AfeConfig& config);

}  // namespace xylosim::afe

#endif  // XYLOSIM_AFE_H_
