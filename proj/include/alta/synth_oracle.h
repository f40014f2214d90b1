// include/alta/synth_oracle.h

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

#ifndef ALTA_SYNTH_ORACLE_H_
#define ALTA_SYNTH_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "alta/audio_features.h"
#include "alta/decoder.h"
#include "alta/lexicon.h"

namespace alta {
namespace synth {

// Controls for one synthetic song. Degradation knobs: label_noise_p moves a
// frame's probability peak to a random symbol; confusion_temperature bleeds
// mass from the true symbol toward uniform.
struct SynthSpec {
  std::vector<std::string> lyric_lines;
  int min_phoneme_frames = 8;
  int max_phoneme_frames = 16;
  int min_gap_frames = 60;   // noise gap between lines
  int max_gap_frames = 140;
  int lead_gap_frames = 150;
  double label_noise_p = 0.0;
  // Soft rows by default: a clear but not extreme margin between the true symbol and
  // the rest, the regime real phoneme posteriors live in. Near 0 the rows
  // turn one-hot.
  double confusion_temperature = 0.25;
  uint64_t seed = 1;
  int frame_rate_hz = 100;
  int repeat = 1;                   // concatenate the rendered song this many times
  int inter_copy_gap_frames = 100;  // noise gap inserted between copies
};

struct GroundTruthWord {
  std::string token;
  int flat_index = 0;
  int line_index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

// Recorded before any degradation is applied.
struct GroundTruth {
  std::vector<GroundTruthWord> words;
  std::vector<int> frame_labels;  // index into symbols, per frame
  std::vector<std::string> symbols;
};

struct SynthResult {
  decode::Posteriorgram post;
  GroundTruth truth;
  std::string lyrics_text;  // effective lyrics (repeats included)
};

// Renders the song once from the seed, then tiles `repeat` copies separated
// by fixed noise gaps, so the copies are bit-identical. Every row of the
// posteriorgram is an exactly normalized probability vector.
SynthResult synth(const SynthSpec& spec, const lex::Lexicon& lexicon, const lex::G2pRules& rules);

// Carrier audio matched to the ground truth: a tone during sung words over a
// constant background hum, with a random fade at line edges (the first line
// rises cleanly). The fades give the energy-based detector realistically
// soft region boundaries.
struct WavSpec {
  int sample_rate_hz = 16000;
  double tone_hz = 220.0;
  double tone_amp = 0.5;
  double hum_hz = 50.0;
  double hum_amp = 0.15;
  double max_edge_fade_s = 1.0;
};

audio::SampleBuffer synth_wav(const SynthSpec& spec, const GroundTruth& truth, const WavSpec& wav);

// Ground-truth timings in the pipeline's TSV shape: token, start, end.
std::string ground_truth_tsv(const GroundTruth& truth);

}  // namespace synth
}  // namespace alta

#endif  // ALTA_SYNTH_ORACLE_H_
