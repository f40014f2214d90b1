// tools/alta.cc

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

// Command-line front end: align / transcribe / evaluate / synth.
// Machine-readable results go to files or stdout; diagnostics go to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "alta/audio_features.h"
#include "alta/errors.h"
#include "alta/lexicon.h"
#include "alta/lyrics_lm.h"
#include "alta/metrics.h"
#include "alta/pipeline.h"
#include "alta/run_config.h"
#include "alta/synth_oracle.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoPath = 2;
constexpr int kExitBadInput = 3;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw alta::InputError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw alta::InputError("cannot write file: " + path);
  out << text;
}

std::vector<alta::metrics::TimedWord> read_timings_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw alta::InputError("cannot open timings file: " + path);
  std::vector<alta::metrics::TimedWord> words;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    alta::metrics::TimedWord w;
    if (!(fields >> w.token >> w.start_s >> w.end_s))
      throw alta::ParseError("expected 'token start end' in " + path, line_no);
    words.push_back(std::move(w));
  }
  return words;
}

std::vector<std::string> read_transcript_tokens(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> tokens;
  std::string raw;
  while (in >> raw) {
    if (raw == alta::lex::kNoiseWord) continue;
    std::string t = alta::lex::normalize_word(raw);
    if (!t.empty()) tokens.push_back(std::move(t));
  }
  return tokens;
}

alta::lex::G2pRules load_rules(const alta::RunConfig& config) {
  if (config.g2p_rules_path.empty()) return alta::lex::G2pRules::defaults();
  return alta::lex::G2pRules::from_file(config.g2p_rules_path);
}

struct ConfigFlags {
  std::string config_path;
  alta::RunConfig config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flat keys)");
    cmd->add_option("--beam", config.beam, "beam width (log score)");
    cmd->add_option("--retry-beam", config.retry_beam, "fallback beam width");
    cmd->add_option("--n-anchor", config.n_anchor, "min matching run length for an anchor");
    cmd->add_option("--n-segment", config.n_segment, "max anchor words per segment");
    cmd->add_option("--lm-order", config.lm_order, "biased LM order");
    cmd->add_option("--tau-silence", config.tau_silence_s, "VAD merge gap threshold (s)");
    cmd->add_option("--tau-max", config.tau_max_s, "VAD max merged region length (s)");
    cmd->add_option("--g2p", config.g2p_rules_path, "g2p rules file");
    cmd->add_option("--jobs", config.jobs, "max parallel decode workers (0 = auto)");
  }

  // Defaults, then the config file, then explicitly set flags.
  alta::RunConfig resolve(CLI::App* cmd) const {
    alta::RunConfig out;
    if (!config_path.empty()) out.apply_json_file(config_path);
    auto take = [&](const char* flag, auto member) {
      if (cmd->count(flag) > 0) out.*member = config.*member;
    };
    take("--beam", &alta::RunConfig::beam);
    take("--retry-beam", &alta::RunConfig::retry_beam);
    take("--n-anchor", &alta::RunConfig::n_anchor);
    take("--n-segment", &alta::RunConfig::n_segment);
    take("--lm-order", &alta::RunConfig::lm_order);
    take("--tau-silence", &alta::RunConfig::tau_silence_s);
    take("--tau-max", &alta::RunConfig::tau_max_s);
    take("--g2p", &alta::RunConfig::g2p_rules_path);
    take("--jobs", &alta::RunConfig::jobs);
    out.validate();
    return out;
  }
};

int run_align(const std::string& post_path, const std::string& lyrics_path, const std::string& lexicon_path,
              const std::string& audio_path, const std::string& out_prefix, bool single_pass,
              const alta::RunConfig& config) {
  alta::decode::Posteriorgram post = alta::decode::load_posteriorgram_json(post_path);
  std::string lyrics = read_text_file(lyrics_path);
  alta::lex::Lexicon lexicon = alta::lex::load_lexicon_file(lexicon_path);
  alta::lex::G2pRules rules = load_rules(config);

  std::optional<alta::audio::SampleBuffer> audio;
  if (!audio_path.empty()) audio = alta::audio::load_wav(audio_path);

  alta::pipeline::AlignmentResult result;
  if (single_pass) {
    result = alta::pipeline::align_song_single_pass(post, lyrics, lexicon, rules, config);
  } else {
    result = alta::pipeline::align_song(audio, post, lyrics, lexicon, rules, config);
    if (result.stats.low_confidence)
      std::cerr << "warning: no anchor run found; fell back to single-pass alignment\n";
  }

  write_text_file(out_prefix + ".tsv", alta::pipeline::timings_tsv(result));
  write_text_file(out_prefix + ".json", alta::pipeline::result_json(result) + "\n");
  std::cerr << "aligned " << result.word_timings.size() << " words in " << result.stats.segment_count
            << " segments; peak tokens " << result.stats.peak_active_tokens << "\n";
  for (const auto& [stage, seconds] : result.stats.stage_seconds)
    std::cerr << "  " << stage << ": " << seconds << " s\n";
  return kExitOk;
}

int run_transcribe(const std::string& post_path, const std::string& lyrics_path, const std::string& lexicon_path,
                   const std::string& audio_path, const std::string& units_mode, const std::string& out_path,
                   const alta::RunConfig& config) {
  if (units_mode != "var" && units_mode != "segment")
    throw alta::InputError("--units must be 'var' or 'segment'");

  alta::decode::Posteriorgram post = alta::decode::load_posteriorgram_json(post_path);
  std::string lyrics = read_text_file(lyrics_path);
  alta::lex::Lexicon lexicon = alta::lex::load_lexicon_file(lexicon_path);
  alta::lex::G2pRules rules = load_rules(config);

  std::optional<alta::audio::SampleBuffer> audio;
  if (!audio_path.empty()) audio = alta::audio::load_wav(audio_path);

  alta::lm::LyricsDocument doc = alta::lm::tokenize_lyrics(lyrics);
  alta::lex::Lexicon full = alta::lex::extend_for_lyrics(lexicon, doc, rules);
  alta::lm::NGramModel model = alta::lm::build_ngram(doc, config.lm_order, config.lm_backoff_penalty);

  std::vector<alta::pipeline::TimeInterval> units;
  if (units_mode == "var") {
    for (const auto& r : alta::pipeline::detect_vars(audio, post, config)) units.push_back({r.start_s, r.end_s});
  } else {
    auto result = alta::pipeline::align_song(audio, post, lyrics, lexicon, rules, config);
    for (const auto& s : result.segments) units.push_back({s.audio_start_s, s.audio_end_s});
  }

  auto transcripts = alta::pipeline::transcribe_units(post, units, full, model, config);

  nlohmann::json j;
  j["units"] = nlohmann::json::array();
  for (const auto& t : transcripts) {
    std::string text;
    for (size_t i = 0; i < t.tokens.size(); ++i) text += (i ? " " : "") + t.tokens[i];
    j["units"].push_back({{"start_s", t.start_s}, {"end_s", t.end_s}, {"text", text}, {"failed", t.failed}});
  }
  std::string combined;
  for (const auto& token : alta::pipeline::stitch_transcripts(transcripts))
    combined += (combined.empty() ? "" : " ") + token;
  j["transcript"] = combined;
  j["unit_mode"] = units_mode;

  if (out_path.empty()) std::cout << j.dump(2) << "\n";
  else write_text_file(out_path, j.dump(2) + "\n");
  return kExitOk;
}

int run_evaluate(const std::string& mode, const std::string& ref_path, const std::string& hyp_path,
                 double tolerance, const std::string& ae_convention) {
  nlohmann::json j;
  if (mode == "align") {
    auto ref = read_timings_tsv(ref_path);
    auto hyp = read_timings_tsv(hyp_path);
    auto convention = ae_convention == "midpoint" ? alta::metrics::AeConvention::kMidpoint
                                                  : alta::metrics::AeConvention::kStartTime;
    alta::metrics::AlignmentReport report = alta::metrics::alignment_report(ref, hyp, tolerance, convention);
    j = {{"mode", "align"},
         {"words", ref.size()},
         {"mean_ae_s", report.mean_ae_s},
         {"median_ae_s", report.median_ae_s},
         {"pcs", report.pcs},
         {"tolerance_s", report.tolerance_s}};
  } else if (mode == "wer") {
    auto ref = read_transcript_tokens(ref_path);
    auto hyp = read_transcript_tokens(hyp_path);
    alta::metrics::TranscriptionReport report = alta::metrics::transcription_report(ref, hyp);
    j = {{"mode", "wer"},
         {"wer", report.wer},
         {"cer", report.cer},
         {"substitutions", report.word_substitutions},
         {"deletions", report.word_deletions},
         {"insertions", report.word_insertions},
         {"ref_words", report.word_ref_len},
         {"char_edits", report.char_edits},
         {"ref_chars", report.char_ref_len}};
  } else {
    throw alta::InputError("--mode must be 'align' or 'wer'");
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_synth(const std::string& lyrics_path, const std::string& lexicon_path, uint64_t seed, double noise,
              double temperature, int repeat, const std::string& out_prefix, bool emit_wav,
              const alta::RunConfig& config) {
  alta::synth::SynthSpec spec;
  std::istringstream lines(read_text_file(lyrics_path));
  std::string line;
  while (std::getline(lines, line)) spec.lyric_lines.push_back(line);
  spec.seed = seed;
  spec.label_noise_p = noise;
  spec.confusion_temperature = temperature;
  spec.repeat = repeat;

  alta::lex::Lexicon lexicon = alta::lex::load_lexicon_file(lexicon_path);
  alta::lex::G2pRules rules = load_rules(config);

  alta::synth::SynthResult result = alta::synth::synth(spec, lexicon, rules);
  alta::decode::save_posteriorgram_json(out_prefix + ".post.json", result.post);
  write_text_file(out_prefix + ".gt.tsv", alta::synth::ground_truth_tsv(result.truth));
  write_text_file(out_prefix + ".lyrics.txt", result.lyrics_text);
  if (emit_wav) {
    alta::audio::SampleBuffer wav = alta::synth::synth_wav(spec, result.truth, alta::synth::WavSpec{});
    alta::audio::write_wav(out_prefix + ".wav", wav);
  }
  std::cerr << "synthesized " << result.post.num_frames() << " frames, " << result.truth.words.size()
            << " words -> " << out_prefix << ".*\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anchored lyrics-to-audio alignment and transcription"};
  app.require_subcommand(1);

  // align
  auto* align = app.add_subcommand("align", "align lyrics to a posteriorgram");
  std::string post_path, lyrics_path, lexicon_path, audio_path, out_prefix = "alignment";
  bool single_pass = false;
  align->add_option("--post", post_path, "posteriorgram JSON")->required();
  align->add_option("--lyrics", lyrics_path, "lyrics text file")->required();
  align->add_option("--lexicon", lexicon_path, "pronunciation dictionary")->required();
  align->add_option("--audio", audio_path, "mono 16-bit WAV (optional)");
  align->add_option("--out", out_prefix, "output path prefix");
  align->add_flag("--single-pass", single_pass, "whole-song forced alignment baseline");
  ConfigFlags align_cfg;
  align_cfg.attach(align);

  // transcribe
  auto* transcribe = app.add_subcommand("transcribe", "biased transcription per unit");
  std::string t_post, t_lyrics, t_lexicon, t_audio, t_units = "var", t_out;
  transcribe->add_option("--post", t_post, "posteriorgram JSON")->required();
  transcribe->add_option("--lyrics", t_lyrics, "lyrics text file")->required();
  transcribe->add_option("--lexicon", t_lexicon, "pronunciation dictionary")->required();
  transcribe->add_option("--audio", t_audio, "mono 16-bit WAV (optional)");
  transcribe->add_option("--units", t_units, "'var' or 'segment'");
  transcribe->add_option("--out", t_out, "output JSON path (default stdout)");
  ConfigFlags transcribe_cfg;
  transcribe_cfg.attach(transcribe);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score timings or transcripts");
  std::string e_mode = "align", e_ref, e_hyp, e_ae = "start";
  double e_tolerance = 0.3;
  evaluate->add_option("--mode", e_mode, "'align' or 'wer'");
  evaluate->add_option("--ref", e_ref, "reference file")->required();
  evaluate->add_option("--hyp", e_hyp, "hypothesis file")->required();
  evaluate->add_option("--tolerance", e_tolerance, "PCS tolerance window (s)");
  evaluate->add_option("--ae-convention", e_ae, "'start' or 'midpoint'");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic song fixture");
  std::string s_lyrics, s_lexicon, s_out = "synth";
  uint64_t s_seed = 1;
  double s_noise = 0.0, s_temperature = 0.25;
  int s_repeat = 1;
  bool s_wav = false;
  synth->add_option("--lyrics", s_lyrics, "lyrics text file")->required();
  synth->add_option("--lexicon", s_lexicon, "pronunciation dictionary")->required();
  synth->add_option("--seed", s_seed, "random seed");
  synth->add_option("--noise", s_noise, "label noise probability");
  synth->add_option("--temperature", s_temperature, "confusion temperature");
  synth->add_option("--repeat", s_repeat, "concatenate the song this many times");
  synth->add_option("--out", s_out, "output path prefix");
  synth->add_flag("--wav", s_wav, "also write a carrier WAV");
  ConfigFlags synth_cfg;
  synth_cfg.attach(synth);

  CLI11_PARSE(app, argc, argv);

  try {
    if (align->parsed())
      return run_align(post_path, lyrics_path, lexicon_path, audio_path, out_prefix, single_pass,
                       align_cfg.resolve(align));
    if (transcribe->parsed())
      return run_transcribe(t_post, t_lyrics, t_lexicon, t_audio, t_units, t_out, transcribe_cfg.resolve(transcribe));
    if (evaluate->parsed()) return run_evaluate(e_mode, e_ref, e_hyp, e_tolerance, e_ae);
    if (synth->parsed())
      return run_synth(s_lyrics, s_lexicon, s_seed, s_noise, s_temperature, s_repeat, s_out, s_wav,
                       synth_cfg.resolve(synth));
  } catch (const alta::NoPath& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoPath;
  } catch (const alta::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const alta::AltaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
