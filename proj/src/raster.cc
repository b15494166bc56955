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

#include "xylosim/raster.h"

#include <algorithm>
#include <string>

#include "xylosim/errors.h"

namespace xylosim {

void EventRaster::append(const EventRaster& other) {
  if (other.num_channels != num_channels) {
    throw ShapeError("cannot append raster with " +
                     std::to_string(other.num_channels) + " channels to one with " +
                     std::to_string(num_channels));
  }
  counts.insert(counts.end(), other.counts.begin(), other.counts.end());
  num_bins += other.num_bins;
}

EventRaster EventRaster::slice(int first, int count) const {
  if (first < 0 || count < 0 || first + count > num_bins) {
    throw IndexError("raster slice out of range");
  }
  EventRaster out(num_channels, count, bin_dt_s);
  std::copy_n(counts.begin() + static_cast<std::ptrdiff_t>(first) * num_channels,
              static_cast<std::ptrdiff_t>(count) * num_channels, out.counts.begin());
  return out;
}

std::uint64_t EventRaster::channel_total(int channel) const {
  std::uint64_t sum = 0;
  for (int b = 0; b < num_bins; ++b) sum += at(b, channel);
  return sum;
}

std::uint64_t EventRaster::total() const {
  std::uint64_t sum = 0;
  for (EventCount c : counts) sum += c;
  return sum;
}

}  // namespace xylosim
