// src/synth_oracle.cc

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

#include "alta/synth_oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "alta/errors.h"
#include "alta/lyrics_lm.h"
#include "alta/rng.h"

namespace alta {
namespace synth {

SynthResult synth(const SynthSpec& spec, const lex::Lexicon& lexicon, const lex::G2pRules& rules) {
  if (spec.label_noise_p < 0.0 || spec.label_noise_p > 1.0)
    throw InputError("label_noise_p must lie in [0, 1]");
  if (spec.min_phoneme_frames < 1 || spec.max_phoneme_frames < spec.min_phoneme_frames)
    throw InputError("invalid phoneme duration range");
  if (spec.min_gap_frames < 0 || spec.max_gap_frames < spec.min_gap_frames)
    throw InputError("invalid gap duration range");
  if (spec.repeat < 1) throw InputError("repeat must be >= 1");
  if (spec.lyric_lines.empty()) throw EmptyLyrics("synthesis needs at least one lyric line");

  std::string base_text;
  for (const auto& line : spec.lyric_lines) base_text += line + "\n";
  lm::LyricsDocument doc = lm::tokenize_lyrics(base_text);
  lex::Lexicon full = lex::extend_for_lyrics(lexicon, doc, rules);

  // Deterministic symbol table: the extended lexicon's inventory plus the
  // reserved units, sorted.
  std::set<std::string> symbol_set;
  for (const auto& s : full.phoneme_inventory()) symbol_set.insert(s);
  symbol_set.insert(lex::kSilSymbol);
  symbol_set.insert(lex::kNseSymbol);
  std::vector<std::string> symbols(symbol_set.begin(), symbol_set.end());
  auto symbol_id = [&symbols](const std::string& s) {
    return static_cast<int>(std::lower_bound(symbols.begin(), symbols.end(), s) - symbols.begin());
  };
  const int nse = symbol_id(lex::kNseSymbol);

  Rng rng(spec.seed);

  // Render one copy: frame labels plus word extents in frames.
  struct WordExtent {
    std::string token;
    int line_index;
    int begin_frame;
    int end_frame;  // exclusive
  };
  std::vector<int> base_labels;
  std::vector<WordExtent> base_words;

  for (int g = 0; g < spec.lead_gap_frames; ++g) base_labels.push_back(nse);
  int line_index = 0;
  size_t flat = 0;
  for (const auto& line : doc.lines) {
    for (const auto& token : line) {
      if (token == lex::kNoiseWord) continue;
      const auto& pron = full.pronunciations(token).front();
      int begin = static_cast<int>(base_labels.size());
      for (const auto& phoneme : pron) {
        int dur = rng.uniform_int(spec.min_phoneme_frames, spec.max_phoneme_frames);
        int id = symbol_id(phoneme);
        for (int d = 0; d < dur; ++d) base_labels.push_back(id);
      }
      base_words.push_back({token, line_index, begin, static_cast<int>(base_labels.size())});
      ++flat;
    }
    ++line_index;
    if (line_index < static_cast<int>(doc.lines.size())) {
      int gap = rng.uniform_int(spec.min_gap_frames, spec.max_gap_frames);
      for (int g = 0; g < gap; ++g) base_labels.push_back(nse);
    }
  }

  // Tile copies with fixed inter-copy gaps.
  std::vector<int> labels;
  GroundTruth truth;
  truth.symbols = symbols;
  const double rate = static_cast<double>(spec.frame_rate_hz);
  const int lines_per_copy = static_cast<int>(doc.lines.size());
  const int words_per_copy = static_cast<int>(base_words.size());
  for (int copy = 0; copy < spec.repeat; ++copy) {
    if (copy > 0)
      for (int g = 0; g < spec.inter_copy_gap_frames; ++g) labels.push_back(nse);
    int offset = static_cast<int>(labels.size());
    labels.insert(labels.end(), base_labels.begin(), base_labels.end());
    for (int i = 0; i < words_per_copy; ++i) {
      const WordExtent& w = base_words[i];
      truth.words.push_back({w.token, copy * words_per_copy + i, copy * lines_per_copy + w.line_index,
                             (offset + w.begin_frame) / rate, (offset + w.end_frame) / rate});
    }
  }
  truth.frame_labels = labels;

  // Row construction. The true symbol keeps mass 1 - t + t/K; the leak t is
  // spread uniformly, so each row sums to one up to rounding.
  const int num_symbols = static_cast<int>(symbols.size());
  const double t = std::max(spec.confusion_temperature, 1e-8);
  const double leak_each = t / num_symbols;
  const double peak = 1.0 - t + leak_each;
  const double log_leak = std::log(leak_each);
  const double log_peak = std::log(peak);

  decode::Posteriorgram post;
  post.symbols = symbols;
  post.frame_rate_hz = spec.frame_rate_hz;
  post.log_probs.reserve(labels.size());
  for (int true_label : labels) {
    int shown = true_label;
    if (spec.label_noise_p > 0.0 && rng.uniform01() < spec.label_noise_p)
      shown = rng.uniform_int(0, num_symbols - 1);
    std::vector<double> row(num_symbols, log_leak);
    row[shown] = log_peak;
    post.log_probs.push_back(std::move(row));
  }

  SynthResult result;
  result.post = std::move(post);
  result.truth = std::move(truth);
  for (int copy = 0; copy < spec.repeat; ++copy) result.lyrics_text += base_text;
  return result;
}

audio::SampleBuffer synth_wav(const SynthSpec& spec, const GroundTruth& truth, const WavSpec& wav) {
  const int samples_per_frame = wav.sample_rate_hz / spec.frame_rate_hz;
  if (samples_per_frame * spec.frame_rate_hz != wav.sample_rate_hz)
    throw InputError("sample rate must be a multiple of the frame rate");

  // Line extents in seconds, from the ground truth words.
  struct LineExtent {
    double start_s;
    double end_s;
  };
  std::vector<LineExtent> lines;
  for (const auto& w : truth.words) {
    if (lines.empty() || w.line_index >= static_cast<int>(lines.size()))
      lines.push_back({w.start_s, w.end_s});
    else
      lines.back().end_s = w.end_s;
  }

  // Edge fades are sampled per line; the opening line rises cleanly so the
  // first lyric word is never clipped out of the detected regions.
  Rng rng(spec.seed ^ 0x5deece66dull);
  std::vector<double> fade_in(lines.size(), 0.0), fade_out(lines.size(), 0.0);
  for (size_t i = 0; i < lines.size(); ++i) {
    double half = 0.5 * (lines[i].end_s - lines[i].start_s);
    if (i > 0) fade_in[i] = std::min(rng.uniform01() * wav.max_edge_fade_s, half);
    if (i + 1 < lines.size()) fade_out[i] = std::min(rng.uniform01() * wav.max_edge_fade_s, half);
  }

  const size_t total_samples = truth.frame_labels.size() * static_cast<size_t>(samples_per_frame);
  audio::SampleBuffer buf;
  buf.sample_rate_hz = wav.sample_rate_hz;
  buf.samples.resize(total_samples, 0.0);

  const double two_pi = 6.283185307179586;
  size_t cursor = 0;  // lines are time-ordered, samples scan forward
  for (size_t s = 0; s < total_samples; ++s) {
    double time = static_cast<double>(s) / wav.sample_rate_hz;
    double sample = wav.hum_amp * std::sin(two_pi * wav.hum_hz * time);
    while (cursor < lines.size() && time >= lines[cursor].end_s) ++cursor;
    if (cursor < lines.size() && time >= lines[cursor].start_s) {
      double ramp = 1.0;
      if (fade_in[cursor] > 0.0 && time < lines[cursor].start_s + fade_in[cursor])
        ramp = std::min(ramp, (time - lines[cursor].start_s) / fade_in[cursor]);
      if (fade_out[cursor] > 0.0 && time >= lines[cursor].end_s - fade_out[cursor])
        ramp = std::min(ramp, (lines[cursor].end_s - time) / fade_out[cursor]);
      sample += ramp * wav.tone_amp * std::sin(two_pi * wav.tone_hz * time);
    }
    buf.samples[s] = sample;
  }
  return buf;
}

std::string ground_truth_tsv(const GroundTruth& truth) {
  std::string out;
  char line[256];
  for (const auto& w : truth.words) {
    std::snprintf(line, sizeof(line), "%s\t%.3f\t%.3f\n", w.token.c_str(), w.start_s, w.end_s);
    out += line;
  }
  return out;
}

}  // namespace synth
}  // namespace alta
