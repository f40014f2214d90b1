// include/alta/vad.h

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

#ifndef ALTA_VAD_H_
#define ALTA_VAD_H_

#include <string>
#include <vector>

#include "alta/audio_features.h"

namespace alta {
namespace vad {

struct VoiceActivityRegion {
  double start_s = 0.0;
  double end_s = 0.0;

  double length_s() const { return end_s - start_s; }
  bool operator==(const VoiceActivityRegion&) const = default;
};

struct VadConfig {
  double tau_silence_s = 0.8;       // merge regions separated by less than this
  double tau_max_s = 6.0;           // stop growing a merged region past this length
  double threshold_fraction = 0.3;  // activity threshold as a fraction of the energy range
};

// Energy thresholding: a frame is active iff its log-energy reaches
// e_min + threshold_fraction * (e_max - e_min). Maximal runs of active frames
// become regions spanning [run_start*hop, run_last*hop + frame_len).
// A flat track degenerates to a single region covering everything.
std::vector<VoiceActivityRegion> detect_regions(const audio::EnergyTrack& energy, const VadConfig& cfg);

// Greedy left-to-right merge: the next region is absorbed iff the silence gap
// is shorter than tau_silence_s and the accumulated region is still at most
// tau_max_s long. Input must be sorted and disjoint (throws UnsortedInput).
std::vector<VoiceActivityRegion> merge_regions(const std::vector<VoiceActivityRegion>& regions, const VadConfig& cfg);

// JSON array of {"start_s":..., "end_s":...}.
std::string regions_to_json(const std::vector<VoiceActivityRegion>& regions);

}  // namespace vad
}  // namespace alta

#endif  // ALTA_VAD_H_
