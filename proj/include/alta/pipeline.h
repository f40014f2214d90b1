// include/alta/pipeline.h

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

#ifndef ALTA_PIPELINE_H_
#define ALTA_PIPELINE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alta/anchoring.h"
#include "alta/audio_features.h"
#include "alta/decoder.h"
#include "alta/lexicon.h"
#include "alta/lyrics_lm.h"
#include "alta/run_config.h"
#include "alta/segmentation.h"
#include "alta/vad.h"

namespace alta {
namespace pipeline {

// One lyric word on the global timeline; the pipeline's final output unit.
struct WordTiming {
  std::string token;
  int flat_index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  int segment_index = 0;
};

struct PipelineStats {
  size_t peak_active_tokens = 0;  // max over all decode calls
  size_t peak_bytes_estimate = 0;
  size_t total_token_expansions = 0;
  int used_retry_beam_count = 0;
  int anchor_word_count = 0;
  int segment_count = 0;
  bool low_confidence = false;  // anchorless fallback fired
  std::map<std::string, double> stage_seconds;
};

struct AlignmentResult {
  std::vector<WordTiming> word_timings;
  std::vector<seg::Segment> segments;
  std::vector<anchor::AnchorRun> anchors;
  PipelineStats stats;
};

// Voice activity regions from the audio's log-energy, or, when no audio is
// available, from the posteriorgram's non-SIL/NSE probability mass.
std::vector<vad::VoiceActivityRegion> detect_vars(const std::optional<audio::SampleBuffer>& audio,
                                                  const decode::Posteriorgram& post,
                                                  const RunConfig& config);

// The anchored two-pass flow: voice activity regions, biased transcription
// per region, text alignment against the lyrics, anchor runs, segmentation at
// anchor boundaries, and a final forced-alignment pass per segment. Falls
// back to a single whole-song pass (flagged low_confidence) when no anchor
// run is found.
AlignmentResult align_song(const std::optional<audio::SampleBuffer>& audio,
                           const decode::Posteriorgram& post,
                           const std::string& lyrics_text,
                           const lex::Lexicon& lexicon,
                           const lex::G2pRules& rules,
                           const RunConfig& config);

// Baseline: one forced-alignment graph over the entire lyrics and the entire
// posteriorgram. Same output schema and stats.
AlignmentResult align_song_single_pass(const decode::Posteriorgram& post,
                                       const std::string& lyrics_text,
                                       const lex::Lexicon& lexicon,
                                       const lex::G2pRules& rules,
                                       const RunConfig& config);

struct UnitTranscript {
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<std::string> tokens;           // noise tags stripped
  std::vector<decode::WordInterval> words;   // same words with global times
  bool failed = false;                       // decode found no path in this unit
};

struct TimeInterval {
  double start_s = 0.0;
  double end_s = 0.0;
};

// Biased transcription of each unit; failures are reported per unit without
// aborting the rest.
std::vector<UnitTranscript> transcribe_units(const decode::Posteriorgram& post,
                                             const std::vector<TimeInterval>& units,
                                             const lex::Lexicon& lexicon,
                                             const lm::NGramModel& model,
                                             const RunConfig& config,
                                             PipelineStats* stats = nullptr);

// Joins unit transcripts into one token stream. A word sliver left at a unit
// boundary gets re-recognized at the start of the next unit; a short leading
// run that duplicates the tail of the stream so far is dropped.
std::vector<std::string> stitch_transcripts(const std::vector<UnitTranscript>& units);

// Sanity checks every result must satisfy: full flat-word coverage in order,
// start < end per word, globally non-decreasing starts, segments tiling the
// lyrics. Throws AltaError on violation.
void validate_result(const AlignmentResult& result, size_t num_flat_words, double duration_s);

// "token<TAB>start<TAB>end" lines, three decimals.
std::string timings_tsv(const AlignmentResult& result);

// JSON with words, segments, anchors and the deterministic stats fields.
// Wall-clock stage times are intentionally not serialized so that repeated
// runs produce identical bytes.
std::string result_json(const AlignmentResult& result);

}  // namespace pipeline
}  // namespace alta

#endif  // ALTA_PIPELINE_H_
