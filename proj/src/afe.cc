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

#include "xylosim/afe.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "xylosim/errors.h"

namespace xylosim::afe {

namespace {

constexpr double kPoleMargin = 1e-9;

std::string fmt_hz(double hz) {
  std::ostringstream os;
  os << hz << " Hz";
  return os.str();
}

}  // namespace

GainDb gain_from_db(int db) {
  switch (db) {
    case 0:
      return GainDb::k0;
    case 6:
      return GainDb::k6;
    case 12:
      return GainDb::k12;
    default:
      throw ConfigError("gain_db must be 0, 6 or 12 (got " +
                        std::to_string(db) + ")");
  }
}

double gain_factor(GainDb gain) {
  return std::pow(10.0, static_cast<int>(gain) / 20.0);
}

void AfeConfig::validate() const {
  if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be > 0");
  if (num_bands < 1) throw ConfigError("num_bands must be >= 1");
  if (!(f_low_hz > 0.0)) throw ConfigError("f_low_hz must be > 0");
  // A single band may sit on one frequency.
  if (num_bands > 1 ? !(f_low_hz < f_high_hz) : !(f_low_hz <= f_high_hz)) {
    throw ConfigError("f_low_hz must be below f_high_hz");
  }
  if (!(f_high_hz < sample_rate_hz / 2.0)) {
    throw ConfigError("f_high_hz " + fmt_hz(f_high_hz) +
                      " is not below Nyquist " + fmt_hz(sample_rate_hz / 2.0));
  }
  if (!(q_factor > 0.5)) throw ConfigError("q_factor must be > 0.5");
  gain_from_db(static_cast<int>(gain_db));
  if (!(bin_dt_s > 0.0)) throw ConfigError("bin_dt_s must be > 0");
  if (!(encoder.tau_mem_s > 1.0 / sample_rate_hz)) {
    throw ConfigError("encoder tau_mem_s must exceed one sample period");
  }
  if (!(encoder.threshold > 0.0)) throw ConfigError("encoder threshold must be > 0");
  if (encoder.max_events_per_bin < 1) {
    throw ConfigError("encoder max_events_per_bin must be >= 1");
  }
}

double AfeConfig::center_frequency(int band) const {
  if (num_bands == 1) return f_low_hz;
  const double frac = static_cast<double>(band) / (num_bands - 1);
  return f_low_hz * std::pow(f_high_hz / f_low_hz, frac);
}

std::complex<double> BiquadSection::response(double f_hz,
                                             double sample_rate_hz) const {
  const double w = 2.0 * std::numbers::pi * f_hz / sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  return (b[0] + b[1] * z1 + b[2] * z2) / (1.0 + a[0] * z1 + a[1] * z2);
}

std::array<std::complex<double>, 2> BiquadSection::poles() const {
  // Roots of z^2 + a1 z + a2.
  const std::complex<double> disc = std::sqrt(std::complex<double>(a[0] * a[0] - 4.0 * a[1]));
  return {(-a[0] + disc) / 2.0, (-a[0] - disc) / 2.0};
}

FilterbankSpec design_filterbank(const AfeConfig& config) {
  config.validate();
  const double fs = config.sample_rate_hz;
  const double nyquist = fs / 2.0;
  const double k = 2.0 * fs;

  FilterbankSpec spec;
  spec.sample_rate_hz = fs;
  for (int band = 0; band < config.num_bands; ++band) {
    const double fc = config.center_frequency(band);
    const double bw = fc / config.q_factor;
    if (!(fc * (1.0 + 1.0 / (2.0 * config.q_factor)) < nyquist)) {
      throw ConfigError("band " + std::to_string(band) + " upper edge exceeds Nyquist");
    }

    // Digital edges f1 < f2 with f2 - f1 = bw and tan(pi f1/fs) tan(pi f2/fs)
    // = tan^2(pi fc/fs); the bilinear map sends the analog geometric centre
    // to fc. Closed form from the tan addition rule.
    const double t0 = std::tan(std::numbers::pi * fc / fs);
    const double td = std::tan(std::numbers::pi * bw / fs);
    const double p = td * (1.0 + t0 * t0);
    const double t1 = (-p + std::sqrt(p * p + 4.0 * t0 * t0)) / 2.0;
    const double denom = 1.0 - t1 * td;
    if (!(denom > 0.0) || std::atan(t1) * fs / std::numbers::pi + bw >= nyquist) {
      throw ConfigError("band " + std::to_string(band) +
                        " -3 dB edge reaches Nyquist");
    }
    const double t2 = (t1 + td) / denom;

    const double w0 = k * t0;
    const double b_analog = k * (t2 - t1);
    const double a0 = k * k + b_analog * k + w0 * w0;
    BiquadSection s;
    s.b = {b_analog * k / a0, 0.0, -b_analog * k / a0};
    s.a = {(2.0 * w0 * w0 - 2.0 * k * k) / a0,
           (k * k - b_analog * k + w0 * w0) / a0};
    for (const auto& pole : s.poles()) {
      if (!(std::abs(pole) < 1.0 - kPoleMargin)) {
        throw ConfigError("band " + std::to_string(band) +
                          " is unstable after discretisation");
      }
    }
    spec.sections.push_back(s);
    spec.center_hz.push_back(fc);
  }
  return spec;
}

AudioBuffer apply_gain(const AudioBuffer& audio, GainDb gain) {
  AudioBuffer out = audio;
  if (gain == GainDb::k0) return out;
  const double g = gain_factor(gain);
  for (double& x : out.samples) x *= g;
  return out;
}

FilterbankState::FilterbankState(const FilterbankSpec& spec)
    : sections_(spec.sections),
      z1_(spec.sections.size(), 0.0),
      z2_(spec.sections.size(), 0.0) {}

void FilterbankState::step(double sample, std::span<double> out) {
  const std::size_t n = sections_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const BiquadSection& s = sections_[i];
    const double y = s.b[0] * sample + z1_[i];
    z1_[i] = s.b[1] * sample - s.a[0] * y + z2_[i];
    z2_[i] = s.b[2] * sample - s.a[1] * y;
    out[i] = y;
  }
}

std::vector<double> FilterbankState::step(double sample) {
  std::vector<double> out(sections_.size());
  step(sample, out);
  return out;
}

void FilterbankState::reset() {
  std::fill(z1_.begin(), z1_.end(), 0.0);
  std::fill(z2_.begin(), z2_.end(), 0.0);
}

EncoderState::EncoderState(const LifEncoderConfig& config, int num_channels,
                           double sample_rate_hz)
    : retention_(std::exp(-1.0 / (sample_rate_hz * config.tau_mem_s))),
      threshold_(config.threshold),
      max_events_(static_cast<EventCount>(config.max_events_per_bin)),
      v_(static_cast<std::size_t>(num_channels), 0.0) {}

void EncoderState::step(std::span<const double> rectified,
                        std::span<EventCount> events) {
  for (std::size_t c = 0; c < v_.size(); ++c) {
    double v = v_[c] * retention_ + rectified[c];
    EventCount n = 0;
    while (v >= threshold_ && n < max_events_) {
      v -= threshold_;
      ++n;
    }
    v_[c] = v;
    events[c] = n;
  }
}

void EncoderState::reset() { std::fill(v_.begin(), v_.end(), 0.0); }

int steps_per_bin(double bin_dt_s, double sample_rate_hz) {
  const double steps = bin_dt_s * sample_rate_hz;
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-6) {
    std::ostringstream os;
    os << "fs * bin_dt_s = " << steps << " is not a positive integer";
    throw ConfigError(os.str());
  }
  return static_cast<int>(rounded);
}

EventRaster bin_events(std::span<const EventCount> events, int num_channels,
                       double bin_dt_s, double sample_rate_hz,
                       int max_events_per_bin) {
  const int per_bin = steps_per_bin(bin_dt_s, sample_rate_hz);
  if (num_channels < 1 || events.size() % num_channels != 0) {
    throw ShapeError("event stream length is not a multiple of the channel count");
  }
  const std::size_t steps = events.size() / num_channels;
  const int bins = static_cast<int>(steps / per_bin);
  const auto cap = static_cast<EventCount>(max_events_per_bin);
  EventRaster raster(num_channels, bins, bin_dt_s);
  for (int b = 0; b < bins; ++b) {
    for (int s = 0; s < per_bin; ++s) {
      const EventCount* row =
          events.data() + (static_cast<std::size_t>(b) * per_bin + s) * num_channels;
      for (int c = 0; c < num_channels; ++c) {
        EventCount& cell = raster.at(b, c);
        cell = std::min<EventCount>(cap, cell + std::min(row[c], cap));
      }
    }
  }
  return raster;
}

AfeEncoder::AfeEncoder(const AfeConfig& config)
    : config_(config),
      spec_(design_filterbank(config)),
      filters_(spec_),
      encoder_(config.encoder, config.num_bands, config.sample_rate_hz),
      gain_(gain_factor(config.gain_db)),
      steps_per_bin_(steps_per_bin(config.bin_dt_s, config.sample_rate_hz)),
      pending_(static_cast<std::size_t>(config.num_bands), 0),
      band_out_(static_cast<std::size_t>(config.num_bands), 0.0),
      step_events_(static_cast<std::size_t>(config.num_bands), 0) {}

EventRaster AfeEncoder::push(std::span<const double> samples) {
  const int channels = config_.num_bands;
  const auto cap = static_cast<EventCount>(config_.encoder.max_events_per_bin);
  EventRaster out(channels, 0, config_.bin_dt_s);
  out.counts.reserve((samples.size() / steps_per_bin_ + 1) * channels);
  for (double x : samples) {
    filters_.step(gain_ * x, band_out_);
    for (double& y : band_out_) y = rectify(y);
    encoder_.step(band_out_, step_events_);
    for (int c = 0; c < channels; ++c) {
      pending_[c] = std::min(cap, pending_[c] + step_events_[c]);
    }
    if (++steps_in_bin_ == steps_per_bin_) {
      out.counts.insert(out.counts.end(), pending_.begin(), pending_.end());
      ++out.num_bins;
      std::fill(pending_.begin(), pending_.end(), 0);
      steps_in_bin_ = 0;
    }
  }
  return out;
}

void AfeEncoder::reset() {
  filters_.reset();
  encoder_.reset();
  steps_in_bin_ = 0;
  std::fill(pending_.begin(), pending_.end(), 0);
}

EventRaster encode_audio(const AudioBuffer& audio, const AfeConfig& config) {
  if (audio.sample_rate_hz != config.sample_rate_hz) {
    std::ostringstream os;
    os << "audio sample rate " << audio.sample_rate_hz
       << " Hz does not match configured " << config.sample_rate_hz << " Hz";
    throw ConfigError(os.str());
  }
  AfeEncoder encoder(config);
  return encoder.push(audio.samples);
}

}  // namespace xylosim::afe
