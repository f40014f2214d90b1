// src/segmentation.cc

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

#include "alta/segmentation.h"

#include <json.hpp>

#include "alta/errors.h"
#include "alta/lyrics_lm.h"

namespace alta {
namespace seg {

std::vector<Segment> plan_segments(const std::vector<anchor::AnchorRun>& anchors,
                                   const lm::LyricsDocument& doc,
                                   double audio_duration_s,
                                   double first_var_start_s,
                                   const SegmenterConfig& cfg) {
  if (cfg.n_segment < 2) throw InputError("n_segment must be >= 2");

  // Flatten anchor words in order.
  std::vector<anchor::AnchorTiming> words;
  for (const auto& run : anchors)
    for (const auto& t : run.timings) words.push_back(t);
  if (words.empty()) throw NoAnchors("no anchor words available for segmentation");

  const int total_words = static_cast<int>(doc.flat_words.size());

  double start_time = (words.front().ref_index == 0) ? words.front().start_s : first_var_start_s;

  struct Cut {
    double time;
    int word_index;  // first flat word of the next segment
  };
  std::vector<Cut> cuts;
  int count = 0;
  for (const auto& w : words) {
    if (++count == cfg.n_segment) {
      cuts.push_back({w.end_s, w.ref_index + 1});
      count = 0;
    }
  }
  // A cut that leaves nothing behind it would create an empty segment; the
  // preceding segment simply runs to the end instead.
  while (!cuts.empty() && (cuts.back().word_index >= total_words || cuts.back().time >= audio_duration_s))
    cuts.pop_back();

  std::vector<Segment> segments;
  double cursor_time = start_time;
  int cursor_word = 0;
  for (const auto& cut : cuts) {
    segments.push_back({cursor_time, cut.time, cursor_word, cut.word_index});
    cursor_time = cut.time;
    cursor_word = cut.word_index;
  }
  segments.push_back({cursor_time, audio_duration_s, cursor_word, total_words});
  return segments;
}

std::string segments_to_json(const std::vector<Segment>& segments) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : segments)
    arr.push_back({{"audio_start_s", s.audio_start_s},
                   {"audio_end_s", s.audio_end_s},
                   {"word_from", s.word_begin},
                   {"word_to", s.word_end}});
  return arr.dump();
}

}  // namespace seg
}  // namespace alta
