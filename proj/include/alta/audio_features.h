// include/alta/audio_features.h

// Copyright 2026  ALTA Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ALTA_AUDIO_FEATURES_H_
#define ALTA_AUDIO_FEATURES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace alta {
namespace audio {

// Mono audio, samples normalized to [-1, 1].
struct SampleBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
};

// The floor keeps the log finite on digital silence.
inline constexpr double kEnergyFloor = 1e-10;

struct FrameConfig {
  double frame_len_s = 0.025;
  double hop_s = 0.010;
  double energy_floor = kEnergyFloor;
};

// Framewise log-energy: ln(floor + mean(x^2)) per frame. Frame i covers
// [i*hop_s, i*hop_s + frame_len_s); the trailing partial frame is dropped.
struct EnergyTrack {
  std::vector<double> values;
  double hop_s = 0.010;
  double frame_len_s = 0.025;

  size_t size() const { return values.size(); }
};

// Reads a RIFF/WAVE file: PCM (format code 1), 16-bit, single channel only.
// Samples are scaled by 1/32768. Throws MalformedWav / UnsupportedFormat.
SampleBuffer load_wav(const std::string& path);

// Writes 16-bit mono PCM. Values are clipped to [-1, 1] and scaled by 32767.
// Used by the synthesis tool and test fixtures.
void write_wav(const std::string& path, const SampleBuffer& buf);

// Throws EmptyAudio if the buffer holds less than one full frame.
EnergyTrack frame_log_energy(const SampleBuffer& buf, const FrameConfig& cfg);

}  // namespace audio
}  // namespace alta

#endif  // ALTA_AUDIO_FEATURES_H_
