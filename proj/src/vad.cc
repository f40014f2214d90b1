// src/vad.cc

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

#include "alta/vad.h"

#include <algorithm>

#include <json.hpp>

#include "alta/errors.h"

namespace alta {
namespace vad {

std::vector<VoiceActivityRegion> detect_regions(const audio::EnergyTrack& energy, const VadConfig& cfg) {
  if (energy.values.empty()) throw InputError("empty energy track");

  auto [min_it, max_it] = std::minmax_element(energy.values.begin(), energy.values.end());
  double threshold = *min_it + cfg.threshold_fraction * (*max_it - *min_it);

  std::vector<VoiceActivityRegion> regions;
  bool in_run = false;
  size_t run_start = 0;
  for (size_t i = 0; i <= energy.values.size(); ++i) {
    bool active = i < energy.values.size() && energy.values[i] >= threshold;
    if (active && !in_run) {
      in_run = true;
      run_start = i;
    } else if (!active && in_run) {
      in_run = false;
      size_t run_last = i - 1;
      VoiceActivityRegion region{static_cast<double>(run_start) * energy.hop_s,
                                 static_cast<double>(run_last) * energy.hop_s + energy.frame_len_s};
      // A frame is longer than a hop, so runs separated by sub-frame silence
      // can overlap; they belong to one region.
      if (!regions.empty() && region.start_s < regions.back().end_s)
        regions.back().end_s = std::max(regions.back().end_s, region.end_s);
      else
        regions.push_back(region);
    }
  }
  return regions;
}

std::vector<VoiceActivityRegion> merge_regions(const std::vector<VoiceActivityRegion>& regions, const VadConfig& cfg) {
  for (size_t i = 0; i < regions.size(); ++i) {
    if (regions[i].end_s <= regions[i].start_s)
      throw UnsortedInput("region with non-positive length");
    if (i > 0 && regions[i].start_s < regions[i - 1].end_s)
      throw UnsortedInput("regions overlap or are out of order");
  }
  if (regions.empty()) return {};

  std::vector<VoiceActivityRegion> merged;
  VoiceActivityRegion current = regions.front();
  for (size_t i = 1; i < regions.size(); ++i) {
    double gap = regions[i].start_s - current.end_s;
    if (gap < cfg.tau_silence_s && current.length_s() <= cfg.tau_max_s) {
      current.end_s = regions[i].end_s;
    } else {
      merged.push_back(current);
      current = regions[i];
    }
  }
  merged.push_back(current);
  return merged;
}

std::string regions_to_json(const std::vector<VoiceActivityRegion>& regions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : regions) arr.push_back({{"start_s", r.start_s}, {"end_s", r.end_s}});
  return arr.dump();
}

}  // namespace vad
}  // namespace alta
