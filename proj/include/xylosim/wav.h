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

#ifndef XYLOSIM_WAV_H_
#define XYLOSIM_WAV_H_

#include <filesystem>

#include "xylosim/afe.h"

namespace xylosim::io {

enum class WavEncoding { kPcm16, kFloat32 };

// Mono RIFF/WAVE, 16-bit PCM or 32-bit IEEE float. Throws IoError when the
// file cannot be opened and ParseError for anything else it cannot decode.
afe::AudioBuffer read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, const afe::AudioBuffer& audio,
               WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace xylosim::io

#endif  // XYLOSIM_WAV_H_
