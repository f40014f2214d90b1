// src/pipeline.cc

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

#include "alta/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "alta/errors.h"

namespace alta {
namespace pipeline {

namespace {

class StageTimer {
 public:
  explicit StageTimer(PipelineStats* stats) : stats_(stats) {}
  void record(const std::string& stage) {
    auto now = std::chrono::steady_clock::now();
    stats_->stage_seconds[stage] += std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  PipelineStats* stats_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Runs fn(0..n-1) with at most `jobs` workers. Results must be written into
// per-index slots; the first failing index's exception is rethrown, so the
// outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (n <= 0) return;
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (int i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

void fold_stats(PipelineStats* agg, const decode::DecodeStats& s) {
  agg->peak_active_tokens = std::max(agg->peak_active_tokens, s.peak_active_tokens);
  agg->total_token_expansions += s.total_token_expansions;
  if (s.used_retry_beam) ++agg->used_retry_beam_count;
  agg->peak_bytes_estimate = agg->peak_active_tokens * decode::kBytesPerToken;
}

struct FrameRange {
  int begin = 0;
  int end = 0;  // exclusive
};

FrameRange frame_range(const decode::Posteriorgram& post, double start_s, double end_s) {
  int total = post.num_frames();
  FrameRange r;
  r.begin = std::clamp(static_cast<int>(std::llround(start_s * post.frame_rate_hz)), 0, total - 1);
  r.end = std::clamp(static_cast<int>(std::llround(end_s * post.frame_rate_hz)), r.begin + 1, total);
  return r;
}

struct HypWord {
  std::string token;
  double start_s = 0.0;
  double end_s = 0.0;
  int var_index = 0;
};

// Energy thresholding can clip a word's tail out of its region, which would
// drag the measured anchor end (and so the segment cut) early. Walk the
// posteriorgram forward past the region edge while the dominant symbol still
// belongs to the word (or is silence/noise), tolerating short flips.
int extend_through_word_tail(const decode::Posteriorgram& post, int end_frame,
                             const std::vector<lex::Pronunciation>& prons, int max_extra_frames) {
  std::vector<char> allowed(post.symbols.size(), 0);
  auto allow = [&](const std::string& symbol) {
    int col = post.symbol_index(symbol);
    if (col >= 0) allowed[col] = 1;
  };
  allow(lex::kSilSymbol);
  allow(lex::kNseSymbol);
  for (const auto& pron : prons)
    for (const auto& p : pron) allow(p);

  int extended = end_frame;
  int foreign_run = 0;
  for (int f = end_frame; f < post.num_frames() && f - end_frame < max_extra_frames; ++f) {
    const auto& row = post.log_probs[f];
    int arg = 0;
    for (size_t s = 1; s < row.size(); ++s)
      if (row[s] > row[arg]) arg = static_cast<int>(s);
    if (allowed[arg]) {
      foreign_run = 0;
      extended = f + 1;
    } else if (++foreign_run > 2) {
      break;
    }
  }
  return extended;
}

}  // namespace

std::vector<vad::VoiceActivityRegion> detect_vars(const std::optional<audio::SampleBuffer>& audio,
                                                  const decode::Posteriorgram& post,
                                                  const RunConfig& config) {
  vad::VadConfig vcfg{config.tau_silence_s, config.tau_max_s, config.vad_threshold_fraction};
  audio::EnergyTrack track;
  if (audio.has_value()) {
    track = audio::frame_log_energy(*audio, {config.frame_len_s, config.hop_s, config.energy_floor});
  } else {
    // No waveform: treat the probability mass off the silence/noise units as
    // the activity signal and reuse the same thresholding machinery.
    int sil = post.symbol_index(lex::kSilSymbol);
    int nse = post.symbol_index(lex::kNseSymbol);
    track.hop_s = 1.0 / post.frame_rate_hz;
    track.frame_len_s = track.hop_s;
    track.values.reserve(post.log_probs.size());
    for (const auto& row : post.log_probs) {
      double inactive = std::exp(row[sil]) + std::exp(row[nse]);
      track.values.push_back(std::log(std::max(audio::kEnergyFloor, 1.0 - inactive)));
    }
  }
  auto regions = vad::detect_regions(track, vcfg);
  regions = vad::merge_regions(regions, vcfg);
  // Clamp to the decodable range.
  double duration = post.duration_s();
  std::vector<vad::VoiceActivityRegion> clamped;
  for (auto& r : regions) {
    r.start_s = std::max(0.0, r.start_s);
    r.end_s = std::min(duration, r.end_s);
    if (r.end_s > r.start_s) clamped.push_back(r);
  }
  return clamped;
}

AlignmentResult align_song(const std::optional<audio::SampleBuffer>& audio,
                           const decode::Posteriorgram& post,
                           const std::string& lyrics_text,
                           const lex::Lexicon& lexicon,
                           const lex::G2pRules& rules,
                           const RunConfig& config) {
  config.validate();
  if (audio.has_value()) {
    double gap = std::abs(audio->duration_s() - post.duration_s());
    if (gap > 1.0 / post.frame_rate_hz + 1e-9)
      throw InputError("audio and posteriorgram duration differ by more than one frame (" + std::to_string(gap) + " s)");
  }

  AlignmentResult result;
  StageTimer timer(&result.stats);
  const decode::BeamConfig beams{config.beam, config.retry_beam};
  const double rate = static_cast<double>(post.frame_rate_hz);

  lm::LyricsDocument doc = lm::tokenize_lyrics(lyrics_text);
  lex::Lexicon full_lexicon = lex::extend_for_lyrics(lexicon, doc, rules);
  timer.record("lexicon");

  std::vector<vad::VoiceActivityRegion> vars = detect_vars(audio, post, config);
  if (vars.empty()) throw InputError("voice activity detection produced no regions");
  timer.record("vad");

  lm::NGramModel model = lm::build_ngram(doc, config.lm_order, config.lm_backoff_penalty);
  decode::DecodeGraph trans_graph = decode::build_transcription_graph(full_lexicon, model);
  timer.record("graph");

  // Biased transcription of every voice activity region.
  std::vector<decode::Hypothesis> var_hyps(vars.size());
  std::vector<FrameRange> var_frames(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) var_frames[i] = frame_range(post, vars[i].start_s, vars[i].end_s);
  parallel_for(static_cast<int>(vars.size()), config.jobs, [&](int i) {
    decode::Posteriorgram slice = post.slice(var_frames[i].begin, var_frames[i].end);
    var_hyps[i] = decode::beam_viterbi(trans_graph, slice, beams);
  });

  std::vector<HypWord> hyp_words;
  for (size_t i = 0; i < vars.size(); ++i) {
    fold_stats(&result.stats, var_hyps[i].stats);
    double offset = var_frames[i].begin / rate;
    for (const auto& w : var_hyps[i].words) {
      if (w.token == lex::kNoiseWord) continue;
      hyp_words.push_back({w.token, offset + w.start_s, offset + w.end_s, static_cast<int>(i)});
    }
  }
  timer.record("biased_decode");

  // Text alignment and anchor runs.
  std::vector<std::string> ref_tokens;
  ref_tokens.reserve(doc.flat_words.size());
  for (const auto& fw : doc.flat_words) ref_tokens.push_back(fw.token);
  std::vector<std::string> hyp_tokens;
  std::vector<anchor::HypWordTiming> hyp_timings;
  for (const auto& w : hyp_words) {
    hyp_tokens.push_back(w.token);
    hyp_timings.push_back({w.start_s, w.end_s});
  }
  auto labels = anchor::align_words(ref_tokens, hyp_tokens);
  std::vector<anchor::AnchorRun> runs = anchor::select_anchor_runs(labels, hyp_timings, config.n_anchor);
  timer.record("anchoring");

  if (runs.empty()) {
    // Documented fallback: align everything in one pass and flag the result.
    AlignmentResult fallback = align_song_single_pass(post, lyrics_text, lexicon, rules, config);
    fold_stats(&result.stats, decode::DecodeStats{fallback.stats.peak_active_tokens,
                                                  fallback.stats.total_token_expansions, 0,
                                                  fallback.stats.used_retry_beam_count > 0});
    result.word_timings = std::move(fallback.word_timings);
    result.segments = std::move(fallback.segments);
    result.stats.low_confidence = true;
    result.stats.segment_count = static_cast<int>(result.segments.size());
    timer.record("fallback_single_pass");
    validate_result(result, doc.flat_words.size(), post.duration_s());
    return result;
  }

  // Re-time each anchor run by forced alignment over its own audio span.
  struct RunPart {
    anchor::AnchorRun* run;
    size_t first;  // timing index range within the run
    size_t last;
  };
  std::vector<RunPart> parts;
  for (auto& run : runs) {
    size_t begin = 0;
    for (size_t k = 1; k <= run.timings.size(); ++k) {
      bool split = k == run.timings.size() ||
                   hyp_words[run.timings[k].hyp_index].var_index != hyp_words[run.timings[begin].hyp_index].var_index;
      if (split) {
        parts.push_back({&run, begin, k - 1});
        begin = k;
      }
    }
  }
  std::vector<decode::DecodeStats> part_stats(parts.size());
  parallel_for(static_cast<int>(parts.size()), config.jobs, [&](int p) {
    RunPart& part = parts[p];
    FrameRange range = frame_range(post, part.run->timings[part.first].start_s,
                                   part.run->timings[part.last].end_s);
    std::vector<std::string> words;
    for (size_t k = part.first; k <= part.last; ++k)
      words.push_back(ref_tokens[part.run->timings[k].ref_index]);
    range.end = extend_through_word_tail(post, range.end, full_lexicon.pronunciations(words.back()), 50);
    try {
      decode::Hypothesis hyp = decode::beam_viterbi(decode::build_alignment_graph(full_lexicon, words),
                                                    post.slice(range.begin, range.end), beams);
      part_stats[p] = hyp.stats;
      double offset = range.begin / rate;
      size_t w = 0;
      for (size_t k = part.first; k <= part.last && w < hyp.words.size(); ++k, ++w) {
        part.run->timings[k].start_s = offset + hyp.words[w].start_s;
        part.run->timings[k].end_s = offset + hyp.words[w].end_s;
      }
    } catch (const NoPath&) {
      // Keep the biased-decode timings for this part.
    }
  });
  for (const auto& s : part_stats) fold_stats(&result.stats, s);
  for (const auto& run : runs) result.stats.anchor_word_count += static_cast<int>(run.timings.size());
  timer.record("anchor_alignment");

  result.anchors = runs;
  result.segments = seg::plan_segments(runs, doc, post.duration_s(), vars.front().start_s,
                                       seg::SegmenterConfig{config.n_segment});
  result.stats.segment_count = static_cast<int>(result.segments.size());
  timer.record("segmentation");

  // Final pass: forced alignment of every segment's words over its audio.
  std::vector<std::vector<WordTiming>> seg_words(result.segments.size());
  std::vector<decode::DecodeStats> seg_stats(result.segments.size());
  parallel_for(static_cast<int>(result.segments.size()), config.jobs, [&](int s) {
    const seg::Segment& segment = result.segments[s];
    if (segment.word_count() == 0) return;
    FrameRange range = frame_range(post, segment.audio_start_s, segment.audio_end_s);
    std::vector<std::string> words;
    for (int w = segment.word_begin; w < segment.word_end; ++w) words.push_back(ref_tokens[w]);
    // A cut sits at the measured end of the previous word; whatever tail of
    // it leaks across is modeled by an optional context unit.
    std::optional<std::string> context;
    if (segment.word_begin > 0) context = ref_tokens[segment.word_begin - 1];
    decode::Hypothesis hyp;
    try {
      hyp = decode::beam_viterbi(decode::build_alignment_graph(full_lexicon, words, context),
                                 post.slice(range.begin, range.end), beams);
    } catch (const NoPath& e) {
      throw NoPath("segment " + std::to_string(s) + " [" + std::to_string(segment.audio_start_s) + ", " +
                   std::to_string(segment.audio_end_s) + "]: " + e.what());
    }
    seg_stats[s] = hyp.stats;
    double offset = range.begin / rate;
    for (const auto& w : hyp.words) {
      if (w.label_position < 0) continue;
      seg_words[s].push_back({w.token, segment.word_begin + w.label_position, offset + w.start_s, offset + w.end_s, s});
    }
  });
  for (size_t s = 0; s < result.segments.size(); ++s) {
    fold_stats(&result.stats, seg_stats[s]);
    for (auto& w : seg_words[s]) result.word_timings.push_back(std::move(w));
  }
  timer.record("final_alignment");

  validate_result(result, doc.flat_words.size(), post.duration_s());
  return result;
}

AlignmentResult align_song_single_pass(const decode::Posteriorgram& post,
                                       const std::string& lyrics_text,
                                       const lex::Lexicon& lexicon,
                                       const lex::G2pRules& rules,
                                       const RunConfig& config) {
  config.validate();
  AlignmentResult result;
  StageTimer timer(&result.stats);

  lm::LyricsDocument doc = lm::tokenize_lyrics(lyrics_text);
  lex::Lexicon full_lexicon = lex::extend_for_lyrics(lexicon, doc, rules);
  std::vector<std::string> words;
  words.reserve(doc.flat_words.size());
  for (const auto& fw : doc.flat_words) words.push_back(fw.token);
  timer.record("lexicon");

  decode::DecodeGraph graph = decode::build_alignment_graph(full_lexicon, words);
  timer.record("graph");

  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {config.beam, config.retry_beam});
  fold_stats(&result.stats, hyp.stats);
  timer.record("single_pass_alignment");

  for (const auto& w : hyp.words) {
    if (w.label_position < 0) continue;
    result.word_timings.push_back({w.token, w.label_position, w.start_s, w.end_s, 0});
  }
  result.segments.push_back({0.0, post.duration_s(), 0, static_cast<int>(words.size())});
  result.stats.segment_count = 1;
  validate_result(result, doc.flat_words.size(), post.duration_s());
  return result;
}

std::vector<UnitTranscript> transcribe_units(const decode::Posteriorgram& post,
                                             const std::vector<TimeInterval>& units,
                                             const lex::Lexicon& lexicon,
                                             const lm::NGramModel& model,
                                             const RunConfig& config,
                                             PipelineStats* stats) {
  config.validate();
  decode::DecodeGraph graph = decode::build_transcription_graph(lexicon, model);
  const decode::BeamConfig beams{config.beam, config.retry_beam};

  std::vector<UnitTranscript> out(units.size());
  std::vector<decode::DecodeStats> unit_stats(units.size());
  parallel_for(static_cast<int>(units.size()), config.jobs, [&](int i) {
    FrameRange range = frame_range(post, units[i].start_s, units[i].end_s);
    out[i].start_s = units[i].start_s;
    out[i].end_s = units[i].end_s;
    double offset = range.begin / static_cast<double>(post.frame_rate_hz);
    try {
      decode::Hypothesis hyp = decode::beam_viterbi(graph, post.slice(range.begin, range.end), beams);
      unit_stats[i] = hyp.stats;
      for (const auto& w : hyp.words) {
        if (w.token == lex::kNoiseWord) continue;
        out[i].tokens.push_back(w.token);
        out[i].words.push_back({w.token, offset + w.start_s, offset + w.end_s, w.label_position});
      }
    } catch (const NoPath&) {
      out[i].failed = true;
    }
  });
  if (stats)
    for (const auto& s : unit_stats) fold_stats(stats, s);
  return out;
}

std::vector<std::string> stitch_transcripts(const std::vector<UnitTranscript>& units) {
  // A unit re-recognizes at most a couple of words from the sliver of audio
  // the previous boundary left behind; such words end almost immediately.
  constexpr double kSliverWindowS = 0.35;
  constexpr size_t kMaxBoundaryDup = 3;

  std::vector<std::string> out;
  for (const auto& unit : units) {
    if (unit.failed) continue;
    size_t sliver = 0;
    while (sliver < unit.words.size() && sliver < kMaxBoundaryDup &&
           unit.words[sliver].end_s <= unit.start_s + kSliverWindowS)
      ++sliver;
    size_t drop = 0;
    for (size_t j = std::min(sliver, out.size()); j > 0 && drop == 0; --j) {
      bool duplicate = true;
      for (size_t k = 0; k < j && duplicate; ++k)
        duplicate = unit.words[k].token == out[out.size() - j + k];
      if (duplicate) drop = j;
    }
    for (size_t k = drop; k < unit.words.size(); ++k) out.push_back(unit.words[k].token);
  }
  return out;
}

void validate_result(const AlignmentResult& result, size_t num_flat_words, double duration_s) {
  const double eps = 1e-6;
  if (result.word_timings.size() != num_flat_words)
    throw AltaError("result covers " + std::to_string(result.word_timings.size()) + " of " +
                    std::to_string(num_flat_words) + " words");
  double prev_start = -1.0;
  for (size_t i = 0; i < result.word_timings.size(); ++i) {
    const WordTiming& w = result.word_timings[i];
    if (w.flat_index != static_cast<int>(i)) throw AltaError("word timings out of flat order at " + std::to_string(i));
    if (!(w.start_s < w.end_s)) throw AltaError("word " + std::to_string(i) + " has empty interval");
    if (w.start_s < -eps || w.end_s > duration_s + eps)
      throw AltaError("word " + std::to_string(i) + " outside the recording");
    if (w.start_s + eps < prev_start) throw AltaError("word starts decrease at " + std::to_string(i));
    prev_start = w.start_s;
    if (w.segment_index < 0 || w.segment_index >= static_cast<int>(result.segments.size()))
      throw AltaError("word " + std::to_string(i) + " has invalid segment index");
    const seg::Segment& s = result.segments[w.segment_index];
    if (w.flat_index < s.word_begin || w.flat_index >= s.word_end)
      throw AltaError("word " + std::to_string(i) + " outside its segment's span");
  }
  int cursor = 0;
  for (size_t s = 0; s < result.segments.size(); ++s) {
    const seg::Segment& segment = result.segments[s];
    if (segment.word_begin != cursor) throw AltaError("segment word spans do not tile the lyrics");
    if (segment.word_end < segment.word_begin) throw AltaError("segment with negative word span");
    cursor = segment.word_end;
    if (!(segment.audio_start_s < segment.audio_end_s + eps)) throw AltaError("segment audio interval empty");
    if (s > 0 && std::abs(segment.audio_start_s - result.segments[s - 1].audio_end_s) > eps)
      throw AltaError("segments do not tile the audio");
  }
  if (cursor != static_cast<int>(num_flat_words)) throw AltaError("segment word spans do not cover the lyrics");
}

std::string timings_tsv(const AlignmentResult& result) {
  std::string out;
  char line[256];
  for (const auto& w : result.word_timings) {
    std::snprintf(line, sizeof(line), "%s\t%.3f\t%.3f\n", w.token.c_str(), w.start_s, w.end_s);
    out += line;
  }
  return out;
}

std::string result_json(const AlignmentResult& result) {
  nlohmann::json j;
  j["words"] = nlohmann::json::array();
  for (const auto& w : result.word_timings)
    j["words"].push_back({{"token", w.token},
                          {"flat_index", w.flat_index},
                          {"start_s", w.start_s},
                          {"end_s", w.end_s},
                          {"segment", w.segment_index}});
  j["segments"] = nlohmann::json::array();
  for (const auto& s : result.segments)
    j["segments"].push_back({{"audio_start_s", s.audio_start_s},
                             {"audio_end_s", s.audio_end_s},
                             {"word_from", s.word_begin},
                             {"word_to", s.word_end}});
  j["anchors"] = nlohmann::json::array();
  for (const auto& run : result.anchors) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& t : run.timings)
      words.push_back({{"ref_index", t.ref_index}, {"start_s", t.start_s}, {"end_s", t.end_s}});
    j["anchors"].push_back({{"ref_begin", run.ref_begin},
                            {"ref_end", run.ref_end},
                            {"hyp_begin", run.hyp_begin},
                            {"hyp_end", run.hyp_end},
                            {"words", std::move(words)}});
  }
  j["stats"] = {{"peak_active_tokens", result.stats.peak_active_tokens},
                {"peak_bytes_estimate", result.stats.peak_bytes_estimate},
                {"total_token_expansions", result.stats.total_token_expansions},
                {"used_retry_beam_count", result.stats.used_retry_beam_count},
                {"anchor_word_count", result.stats.anchor_word_count},
                {"segment_count", result.stats.segment_count},
                {"low_confidence", result.stats.low_confidence}};
  return j.dump(2);
}

}  // namespace pipeline
}  // namespace alta
