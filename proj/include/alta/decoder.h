// include/alta/decoder.h

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

#ifndef ALTA_DECODER_H_
#define ALTA_DECODER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alta/lexicon.h"
#include "alta/lyrics_lm.h"

namespace alta {
namespace decode {

// Frame-by-symbol log-probability matrix; the sole acoustic evidence
// interface. Every row must be the log of a probability vector.
struct Posteriorgram {
  std::vector<std::string> symbols;  // must include SIL and NSE
  int frame_rate_hz = 100;
  std::vector<std::vector<double>> log_probs;  // frames x symbols

  int num_frames() const { return static_cast<int>(log_probs.size()); }
  double duration_s() const { return static_cast<double>(num_frames()) / frame_rate_hz; }
  int symbol_index(const std::string& symbol) const;  // -1 if absent

  // Row exp-sums within tolerance, SIL/NSE present, at least one frame.
  void validate(double row_tolerance = 1e-6) const;

  // Frame range [begin, end), clamped; shares no storage with the source.
  Posteriorgram slice(int frame_begin, int frame_end) const;
};

// {"symbols": [...], "frame_rate_hz": N, "log_probs": [[...], ...]}
Posteriorgram load_posteriorgram_json(const std::string& path);
void save_posteriorgram_json(const std::string& path, const Posteriorgram& post);

enum class GraphMode { kTranscription, kAlignment };

// Boundary label attached to a word-end transition. Fillers (optional
// silence/noise units) time-stamp the path but are not lyric words.
struct BoundaryLabel {
  std::string token;
  int position = -1;  // index into the forced word sequence; -1 in transcription mode
  bool filler = false;
};

struct Arc {
  uint32_t to = 0;
  int32_t phoneme = -1;  // index into DecodeGraph::phonemes(), -1 = epsilon
  int32_t label = -1;    // index into DecodeGraph::labels(), -1 = none
  double weight = 0.0;   // language-model contribution (log domain)
};

// Lexicon-expanded search network. States are integers; arcs either consume
// one posteriorgram frame (phoneme >= 0) or are free (epsilon). Every phoneme
// state carries a zero-weight self-loop. Built eps-acyclic.
class DecodeGraph {
 public:
  GraphMode mode() const { return mode_; }
  uint32_t start_state() const { return start_state_; }
  size_t num_states() const { return arc_offsets_.size() - 1; }
  size_t num_arcs() const { return arcs_.size(); }
  bool is_final(uint32_t state) const { return final_[state] != 0; }

  const std::vector<std::string>& phonemes() const { return phonemes_; }
  const std::vector<BoundaryLabel>& labels() const { return labels_; }

  const Arc* arcs_begin(uint32_t state) const { return arcs_.data() + arc_offsets_[state]; }
  const Arc* arcs_end(uint32_t state) const { return arcs_.data() + arc_offsets_[state + 1]; }

  friend class GraphBuilder;

 private:
  GraphMode mode_ = GraphMode::kAlignment;
  uint32_t start_state_ = 0;
  std::vector<uint32_t> arc_offsets_;  // CSR: per-state arc ranges
  std::vector<Arc> arcs_;
  std::vector<uint8_t> final_;
  std::vector<std::string> phonemes_;
  std::vector<BoundaryLabel> labels_;
};

// Dynamic-composition transcription network: states pair a stored LM history
// with a position inside a pronunciation. From every history junction there
// is one arc family per vocabulary word, weighted by the biased LM score at
// that junction, plus an optional zero-weight silence self-word.
DecodeGraph build_transcription_graph(const lex::Lexicon& lexicon, const lm::NGramModel& model);

// Linear forced-alignment chain over a fixed word sequence with optional
// silence/noise fillers at every word boundary. All LM weights are zero.
// Repeated words are distinguished by label position. A leading context word,
// when given, becomes an optional suffix-enterable unit at the start of the
// chain: it soaks up the tail of the previous word when the slice begins
// inside one, and costs nothing when it does not.
DecodeGraph build_alignment_graph(const lex::Lexicon& lexicon, const std::vector<std::string>& words,
                                  const std::optional<std::string>& leading_context = std::nullopt);

struct BeamConfig {
  double beam = 30.0;        // log-score pruning width
  double retry_beam = 300.0; // fallback width when the narrow beam dead-ends
};

inline constexpr double kBeamInfinity = 1e18;
inline constexpr size_t kBytesPerToken = 64;  // documented per-token cost constant

// Decode-memory instrumentation. peak_active_tokens counts the largest number
// of token records held live at once: the current frontier plus every record
// retained for traceback. That retained set is what actually bounds a token
// passing decoder's working memory, and it is exactly measurable.
struct DecodeStats {
  size_t peak_active_tokens = 0;
  size_t total_token_expansions = 0;
  size_t peak_bytes_estimate = 0;
  bool used_retry_beam = false;
};

struct WordInterval {
  std::string token;
  double start_s = 0.0;
  double end_s = 0.0;
  int label_position = -1;  // forced-sequence index in alignment mode
};

struct Hypothesis {
  std::vector<WordInterval> words;  // fillers excluded; noise word retained
  double total_logscore = 0.0;
  DecodeStats stats;
};

// Frame-synchronous token passing with per-frame beam pruning. Word start is
// the first frame consumed after the previous boundary label; word end is the
// exclusive end of the frame at its boundary label. Retries once with
// retry_beam when no final-state token survives; throws NoPath if that also
// fails.
Hypothesis beam_viterbi(const DecodeGraph& graph, const Posteriorgram& post, const BeamConfig& cfg);

}  // namespace decode
}  // namespace alta

#endif  // ALTA_DECODER_H_
