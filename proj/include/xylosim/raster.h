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

#ifndef XYLOSIM_RASTER_H_
#define XYLOSIM_RASTER_H_

#include <cstdint>
#include <span>
#include <vector>

namespace xylosim {

using EventCount = std::uint32_t;

// Time-binned event counts, row-major [bin][channel]. This is the interchange
// representation between the audio front-end and the SNN core.
struct EventRaster {
  int num_channels = 0;
  int num_bins = 0;
  double bin_dt_s = 0.010;
  std::vector<EventCount> counts;

  EventRaster() = default;
  EventRaster(int channels, int bins, double dt_s)
      : num_channels(channels),
        num_bins(bins),
        bin_dt_s(dt_s),
        counts(static_cast<std::size_t>(channels) * bins, 0) {}

  EventCount& at(int bin, int channel) {
    return counts[static_cast<std::size_t>(bin) * num_channels + channel];
  }
  EventCount at(int bin, int channel) const {
    return counts[static_cast<std::size_t>(bin) * num_channels + channel];
  }
  std::span<const EventCount> bin(int b) const {
    return {counts.data() + static_cast<std::size_t>(b) * num_channels,
            static_cast<std::size_t>(num_channels)};
  }

  // Appends the bins of `other`; channel counts must agree.
  void append(const EventRaster& other);

  // Copy of bins [first, first + count).
  EventRaster slice(int first, int count) const;

  std::uint64_t channel_total(int channel) const;
  std::uint64_t total() const;

  bool operator==(const EventRaster&) const = default;
};

}  // namespace xylosim

#endif  // XYLOSIM_RASTER_H_
