// include/alta/segmentation.h

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

#ifndef ALTA_SEGMENTATION_H_
#define ALTA_SEGMENTATION_H_

#include <string>
#include <vector>

#include "alta/anchoring.h"

namespace alta {

namespace lm {
struct LyricsDocument;
}

namespace seg {

// One audio interval paired with the flat-word range [word_begin, word_end)
// it must align. Successive segments tile both the recording and the lyrics.
struct Segment {
  double audio_start_s = 0.0;
  double audio_end_s = 0.0;
  int word_begin = 0;
  int word_end = 0;  // exclusive

  int word_count() const { return word_end - word_begin; }
};

struct SegmenterConfig {
  int n_segment = 12;  // max anchor words per segment
};

// Walks the anchor words left to right and cuts after every n_segment-th one
// at (that word's end time, its flat index + 1). The first segment starts at
// the first anchor's start when flat word 0 is anchored, otherwise at the
// first voice-activity region's start; the last segment always runs to
// audio_duration_s. Throws NoAnchors when no anchor word exists.
std::vector<Segment> plan_segments(const std::vector<anchor::AnchorRun>& anchors,
                                   const lm::LyricsDocument& doc,
                                   double audio_duration_s,
                                   double first_var_start_s,
                                   const SegmenterConfig& cfg);

std::string segments_to_json(const std::vector<Segment>& segments);

}  // namespace seg
}  // namespace alta

#endif  // ALTA_SEGMENTATION_H_
