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

#include "xylosim/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "xylosim/errors.h"

namespace xylosim::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T load(const std::vector<char>& bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void store(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

afe::AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError(name + ": not a RIFF/WAVE file", 0);
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.data() + pos, 4);
    const auto size = load<std::uint32_t>(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw ParseError(name + ": truncated chunk " + id, 0);
    if (id == "fmt ") {
      if (size < 16) throw ParseError(name + ": short fmt chunk", 0);
      format = load<std::uint16_t>(bytes, body);
      channels = load<std::uint16_t>(bytes, body + 2);
      rate = load<std::uint32_t>(bytes, body + 4);
      bits = load<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible && size >= 26) {
        format = load<std::uint16_t>(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError(name + ": data chunk before fmt chunk", 0);
      if (channels != 1) {
        throw ParseError(name + ": expected mono audio, got " +
                             std::to_string(channels) + " channels", 0);
      }
      afe::AudioBuffer audio;
      audio.sample_rate_hz = rate;
      if (format == kFormatPcm && bits == 16) {
        const std::size_t n = size / 2;
        audio.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          audio.samples[i] = load<std::int16_t>(bytes, body + 2 * i) / 32768.0;
        }
      } else if (format == kFormatFloat && bits == 32) {
        const std::size_t n = size / 4;
        audio.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          audio.samples[i] = load<float>(bytes, body + 4 * i);
        }
      } else {
        throw ParseError(name + ": unsupported sample format (format " +
                             std::to_string(format) + ", " + std::to_string(bits) +
                             " bits)", 0);
      }
      return audio;
    }
    pos = body + size + (size & 1u);
  }
  throw ParseError(name + ": no data chunk", 0);
}

void write_wav(const std::filesystem::path& path, const afe::AudioBuffer& audio,
               WavEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate_hz));
  const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * bytes_per_sample);

  out.write("RIFF", 4);
  store<std::uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  store<std::uint32_t>(out, 16);
  store<std::uint16_t>(out, pcm ? kFormatPcm : kFormatFloat);
  store<std::uint16_t>(out, 1);
  store<std::uint32_t>(out, rate);
  store<std::uint32_t>(out, rate * bytes_per_sample);
  store<std::uint16_t>(out, bytes_per_sample);
  store<std::uint16_t>(out, static_cast<std::uint16_t>(8 * bytes_per_sample));
  out.write("data", 4);
  store<std::uint32_t>(out, data_size);
  for (double x : audio.samples) {
    if (pcm) {
      const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      store<std::int16_t>(out, static_cast<std::int16_t>(scaled));
    } else {
      store<float>(out, static_cast<float>(x));
    }
  }
  if (data_size & 1u) out.put('\0');
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace xylosim::io
