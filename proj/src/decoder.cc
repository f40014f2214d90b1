// src/decoder.cc

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

#include "alta/decoder.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "alta/errors.h"

namespace alta {
namespace decode {

namespace {
// Stands in for log(0) so that dead hypotheses stay finite and comparable.
constexpr double kLogZero = -1e10;
}

// ---------------------------------------------------------------------------
// Posteriorgram

int Posteriorgram::symbol_index(const std::string& symbol) const {
  for (size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i] == symbol) return static_cast<int>(i);
  return -1;
}

void Posteriorgram::validate(double row_tolerance) const {
  if (frame_rate_hz <= 0) throw InputError("posteriorgram frame rate must be positive");
  if (log_probs.empty()) throw InputError("posteriorgram has no frames");
  if (symbol_index(lex::kSilSymbol) < 0 || symbol_index(lex::kNseSymbol) < 0)
    throw InputError("posteriorgram symbol set must include SIL and NSE");
  for (size_t f = 0; f < log_probs.size(); ++f) {
    if (log_probs[f].size() != symbols.size())
      throw InputError("posteriorgram row " + std::to_string(f) + " has wrong width");
    double sum = 0.0;
    for (double lp : log_probs[f]) sum += std::exp(lp);
    if (std::abs(sum - 1.0) > row_tolerance)
      throw InputError("posteriorgram row " + std::to_string(f) + " is not normalized (exp-sum " + std::to_string(sum) + ")");
  }
}

Posteriorgram Posteriorgram::slice(int frame_begin, int frame_end) const {
  frame_begin = std::clamp(frame_begin, 0, num_frames());
  frame_end = std::clamp(frame_end, frame_begin, num_frames());
  Posteriorgram out;
  out.symbols = symbols;
  out.frame_rate_hz = frame_rate_hz;
  out.log_probs.assign(log_probs.begin() + frame_begin, log_probs.begin() + frame_end);
  return out;
}

Posteriorgram load_posteriorgram_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open posteriorgram file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid posteriorgram JSON in " + path + ": " + e.what());
  }
  Posteriorgram post;
  try {
    post.symbols = j.at("symbols").get<std::vector<std::string>>();
    post.frame_rate_hz = j.at("frame_rate_hz").get<int>();
    post.log_probs = j.at("log_probs").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("posteriorgram schema error in " + path + ": " + e.what());
  }
  post.validate();
  return post;
}

void save_posteriorgram_json(const std::string& path, const Posteriorgram& post) {
  nlohmann::json j;
  j["symbols"] = post.symbols;
  j["frame_rate_hz"] = post.frame_rate_hz;
  j["log_probs"] = post.log_probs;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write posteriorgram file: " + path);
  out << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Graph construction

class GraphBuilder {
 public:
  explicit GraphBuilder(GraphMode mode) { graph_.mode_ = mode; }

  uint32_t new_state() {
    ++num_states_;
    return num_states_ - 1;
  }

  int32_t intern_phoneme(const std::string& symbol) {
    auto it = phoneme_index_.find(symbol);
    if (it != phoneme_index_.end()) return it->second;
    int32_t id = static_cast<int32_t>(graph_.phonemes_.size());
    graph_.phonemes_.push_back(symbol);
    phoneme_index_.emplace(symbol, id);
    return id;
  }

  int32_t add_label(BoundaryLabel label) {
    graph_.labels_.push_back(std::move(label));
    return static_cast<int32_t>(graph_.labels_.size() - 1);
  }

  void add_arc(uint32_t from, uint32_t to, int32_t phoneme, double weight, int32_t label) {
    pending_.push_back({from, Arc{to, phoneme, label, weight}});
  }

  // Chain of one emitting state per phoneme, each with a self-loop, entered
  // from `from`. Returns the state that has consumed the last phoneme.
  uint32_t add_pronunciation_chain(uint32_t from, const lex::Pronunciation& pron) {
    uint32_t prev = from;
    for (const auto& symbol : pron) {
      int32_t ph = intern_phoneme(symbol);
      uint32_t s = new_state();
      add_arc(prev, s, ph, 0.0, -1);
      add_arc(s, s, ph, 0.0, -1);
      prev = s;
    }
    return prev;
  }

  // Optional filler unit looping at a junction: enter by consuming one frame
  // of `symbol`, loop freely, leave over a labeled epsilon back to `junction`.
  void add_filler_loop(uint32_t junction, const std::string& symbol, int32_t label) {
    int32_t ph = intern_phoneme(symbol);
    uint32_t s = new_state();
    add_arc(junction, s, ph, 0.0, -1);
    add_arc(s, s, ph, 0.0, -1);
    add_arc(s, junction, -1, 0.0, label);
  }

  void set_start(uint32_t s) { graph_.start_state_ = s; }
  void set_final(uint32_t s) { finals_.push_back(s); }

  DecodeGraph finish() {
    // Stable counting sort of arcs by source state, into CSR layout.
    graph_.arc_offsets_.assign(num_states_ + 1, 0);
    for (const auto& [from, arc] : pending_) ++graph_.arc_offsets_[from + 1];
    for (size_t i = 1; i <= num_states_; ++i) graph_.arc_offsets_[i] += graph_.arc_offsets_[i - 1];
    graph_.arcs_.resize(pending_.size());
    std::vector<uint32_t> cursor(graph_.arc_offsets_.begin(), graph_.arc_offsets_.end() - 1);
    for (const auto& [from, arc] : pending_) graph_.arcs_[cursor[from]++] = arc;
    pending_.clear();

    graph_.final_.assign(num_states_, 0);
    for (uint32_t s : finals_) graph_.final_[s] = 1;
    return std::move(graph_);
  }

 private:
  DecodeGraph graph_;
  size_t num_states_ = 0;
  std::vector<std::pair<uint32_t, Arc>> pending_;
  std::vector<uint32_t> finals_;
  std::unordered_map<std::string, int32_t> phoneme_index_;
};

DecodeGraph build_transcription_graph(const lex::Lexicon& lexicon, const lm::NGramModel& model) {
  // Closure check: biased decoding requires a pronunciation for every
  // vocabulary word (defensive; extend_for_lyrics guarantees it).
  std::vector<int> word_ids;
  for (int w = 0; w < model.vocab_size(); ++w) {
    if (w == model.begin_id()) continue;
    if (!lexicon.contains(model.token_text(w)))
      throw MissingPronunciation("vocabulary word has no pronunciation: " + model.token_text(w));
    word_ids.push_back(w);
  }

  GraphBuilder b(GraphMode::kTranscription);

  // One boundary label per vocabulary word, plus the silence filler.
  std::unordered_map<int, int32_t> word_label;
  for (int w : word_ids) word_label[w] = b.add_label({model.token_text(w), -1, false});
  int32_t sil_label = b.add_label({lex::kSilSymbol, -1, true});

  struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
      size_t h = 1469598103934665603ull;
      for (int x : v) {
        h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  std::unordered_map<std::vector<int>, uint32_t, VecHash> junction_of;
  std::deque<std::vector<int>> queue;

  auto junction = [&](const std::vector<int>& history) {
    auto it = junction_of.find(history);
    if (it != junction_of.end()) return it->second;
    uint32_t s = b.new_state();
    junction_of.emplace(history, s);
    queue.push_back(history);
    return s;
  };

  // The decode starts in sentence-begin context when the model stores one.
  std::vector<int> start_history;
  if (model.is_stored_history({model.begin_id()})) start_history = {model.begin_id()};
  uint32_t start = junction(start_history);
  b.set_start(start);

  while (!queue.empty()) {
    std::vector<int> history = queue.front();
    queue.pop_front();
    uint32_t from = junction_of.at(history);
    b.set_final(from);  // transcription may stop at any completed word
    b.add_filler_loop(from, lex::kSilSymbol, sil_label);

    for (int w : word_ids) {
      lm::LmScore score = model.score_ids(history, w);
      uint32_t to = junction(model.next_history(history, w));
      for (const auto& pron : lexicon.pronunciations(model.token_text(w))) {
        uint32_t tail = b.add_pronunciation_chain(from, pron);
        b.add_arc(tail, to, -1, score.logp, word_label.at(w));
      }
    }
  }
  return b.finish();
}

DecodeGraph build_alignment_graph(const lex::Lexicon& lexicon, const std::vector<std::string>& words,
                                  const std::optional<std::string>& leading_context) {
  for (const auto& w : words)
    if (!lexicon.contains(w)) throw MissingPronunciation("no pronunciation for forced word: " + w);
  if (leading_context && !lexicon.contains(*leading_context))
    throw MissingPronunciation("no pronunciation for context word: " + *leading_context);

  GraphBuilder b(GraphMode::kAlignment);
  int32_t sil_label = b.add_label({lex::kSilSymbol, -1, true});
  int32_t nse_label = b.add_label({lex::kNoiseWord, -1, true});

  uint32_t prev_junction = b.new_state();
  b.set_start(prev_junction);
  b.add_filler_loop(prev_junction, lex::kSilSymbol, sil_label);
  b.add_filler_loop(prev_junction, lex::kNseSymbol, nse_label);

  if (leading_context) {
    // Any suffix of the context word may begin the slice, so every position
    // of its chain is enterable from the start.
    int32_t ctx_label = b.add_label({*leading_context, -1, true});
    for (const auto& pron : lexicon.pronunciations(*leading_context)) {
      std::vector<uint32_t> chain;
      for (const auto& symbol : pron) {
        int32_t ph = b.intern_phoneme(symbol);
        uint32_t s = b.new_state();
        b.add_arc(prev_junction, s, ph, 0.0, -1);  // enter mid-word
        if (!chain.empty()) b.add_arc(chain.back(), s, ph, 0.0, -1);
        b.add_arc(s, s, ph, 0.0, -1);
        chain.push_back(s);
      }
      b.add_arc(chain.back(), prev_junction, -1, 0.0, ctx_label);
    }
  }

  for (size_t i = 0; i < words.size(); ++i) {
    uint32_t next_junction = b.new_state();
    int32_t label = b.add_label({words[i], static_cast<int>(i), false});
    for (const auto& pron : lexicon.pronunciations(words[i])) {
      uint32_t tail = b.add_pronunciation_chain(prev_junction, pron);
      b.add_arc(tail, next_junction, -1, 0.0, label);
    }
    b.add_filler_loop(next_junction, lex::kSilSymbol, sil_label);
    b.add_filler_loop(next_junction, lex::kNseSymbol, nse_label);
    prev_junction = next_junction;
  }
  b.set_final(prev_junction);
  return b.finish();
}

// ---------------------------------------------------------------------------
// Beam Viterbi token passing

namespace {

// One retained token record: enough to rebuild the best word sequence. The
// record store is the decoder's working set; it is freed only when the decode
// call returns.
struct Record {
  double score = 0.0;
  int32_t prev = -1;
  uint32_t state = 0;
  int32_t frame = -1;
  int32_t label = -1;  // boundary crossed while closing this frame, if any
};

struct Candidate {
  double score = kLogZero;
  int32_t prev = -1;
  int32_t label = -1;
};

struct DecodeAttempt {
  bool success = false;
  std::vector<Record> records;
  int32_t best_final = -1;
  size_t expansions = 0;
};

// Offers keep the higher score; on an exact tie the earlier offer wins, and
// offers are generated in ascending source-state order, so results do not
// depend on container iteration order.
void offer(std::map<uint32_t, Candidate>& cand, uint32_t state, double score, int32_t prev, int32_t label) {
  auto [it, inserted] = cand.try_emplace(state, Candidate{score, prev, label});
  if (!inserted && score > it->second.score) it->second = {score, prev, label};
}

// Closes epsilon arcs within one frame step. Graphs are built without
// epsilon cycles; a path crosses at most one boundary label per frame step.
void eps_close(const DecodeGraph& graph, std::map<uint32_t, Candidate>& cand, size_t& expansions) {
  std::deque<uint32_t> work;
  for (const auto& [state, c] : cand) work.push_back(state);
  size_t guard = 0;
  const size_t guard_limit = (graph.num_states() + 1) * (cand.size() + graph.num_states() + 1);
  while (!work.empty()) {
    uint32_t state = work.front();
    work.pop_front();
    Candidate c = cand.at(state);
    for (const Arc* a = graph.arcs_begin(state); a != graph.arcs_end(state); ++a) {
      if (a->phoneme >= 0) continue;
      ++expansions;
      double score = c.score + a->weight;
      int32_t label = a->label >= 0 ? a->label : c.label;
      assert(!(a->label >= 0 && c.label >= 0 && "two boundary labels in one frame step"));
      auto it = cand.find(a->to);
      if (it == cand.end() || score > it->second.score) {
        cand[a->to] = {score, c.prev, label};
        work.push_back(a->to);
        if (++guard > guard_limit) throw InputError("epsilon cycle detected in decode graph");
      }
    }
  }
}

DecodeAttempt run_decode(const DecodeGraph& graph, const Posteriorgram& post,
                         const std::vector<int>& column_of, double beam) {
  DecodeAttempt attempt;
  std::vector<Record>& records = attempt.records;

  std::map<uint32_t, Candidate> cand;
  offer(cand, graph.start_state(), 0.0, -1, -1);
  eps_close(graph, cand, attempt.expansions);

  // frontier: record index per live state, ascending state order.
  std::vector<int32_t> frontier;
  for (const auto& [state, c] : cand) {
    records.push_back({c.score, c.prev, state, -1, c.label});
    frontier.push_back(static_cast<int32_t>(records.size() - 1));
  }

  const int num_frames = post.num_frames();
  for (int f = 0; f < num_frames; ++f) {
    const std::vector<double>& row = post.log_probs[f];
    cand.clear();
    for (int32_t rec_idx : frontier) {
      const Record& rec = records[rec_idx];
      for (const Arc* a = graph.arcs_begin(rec.state); a != graph.arcs_end(rec.state); ++a) {
        if (a->phoneme < 0) continue;
        ++attempt.expansions;
        double lp = row[column_of[a->phoneme]];
        if (lp < kLogZero) lp = kLogZero;
        offer(cand, a->to, rec.score + lp + a->weight, rec_idx, -1);
      }
    }
    eps_close(graph, cand, attempt.expansions);
    if (cand.empty()) return attempt;  // dead end

    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [state, c] : cand) best = std::max(best, c.score);

    frontier.clear();
    for (const auto& [state, c] : cand) {
      if (c.score < best - beam) continue;
      records.push_back({c.score, c.prev, state, f, c.label});
      frontier.push_back(static_cast<int32_t>(records.size() - 1));
    }
  }

  // Best token sitting on a final state after the last frame.
  for (int32_t rec_idx : frontier) {
    const Record& rec = records[rec_idx];
    if (!graph.is_final(rec.state)) continue;
    if (attempt.best_final < 0 || rec.score > records[attempt.best_final].score) attempt.best_final = rec_idx;
  }
  attempt.success = attempt.best_final >= 0;
  return attempt;
}

}  // namespace

Hypothesis beam_viterbi(const DecodeGraph& graph, const Posteriorgram& post, const BeamConfig& cfg) {
  if (post.num_frames() < 1) throw InputError("cannot decode an empty posteriorgram");

  // Map graph phonemes onto posteriorgram columns.
  std::vector<int> column_of(graph.phonemes().size());
  for (size_t p = 0; p < graph.phonemes().size(); ++p) {
    int col = post.symbol_index(graph.phonemes()[p]);
    if (col < 0) throw InputError("posteriorgram lacks symbol required by graph: " + graph.phonemes()[p]);
    column_of[p] = col;
  }

  DecodeStats stats;
  DecodeAttempt attempt = run_decode(graph, post, column_of, cfg.beam);
  stats.peak_active_tokens = attempt.records.size();
  stats.total_token_expansions = attempt.expansions;

  if (!attempt.success) {
    DecodeAttempt retry = run_decode(graph, post, column_of, cfg.retry_beam);
    stats.used_retry_beam = true;
    stats.peak_active_tokens = std::max(stats.peak_active_tokens, retry.records.size());
    stats.total_token_expansions += retry.expansions;
    if (!retry.success)
      throw NoPath("no complete path through the decode graph (retry beam " + std::to_string(cfg.retry_beam) + ")");
    attempt = std::move(retry);
  }
  stats.peak_bytes_estimate = stats.peak_active_tokens * kBytesPerToken;

  // Backtrace: collect boundary labels oldest-first.
  std::vector<std::pair<int32_t, int32_t>> boundaries;  // (label, frame)
  for (int32_t idx = attempt.best_final; idx >= 0; idx = attempt.records[idx].prev)
    if (attempt.records[idx].label >= 0) boundaries.emplace_back(attempt.records[idx].label, attempt.records[idx].frame);
  std::reverse(boundaries.begin(), boundaries.end());

  Hypothesis hyp;
  hyp.total_logscore = attempt.records[attempt.best_final].score;
  hyp.stats = stats;
  const double rate = static_cast<double>(post.frame_rate_hz);
  int prev_boundary_frame = -1;
  for (const auto& [label_id, frame] : boundaries) {
    const BoundaryLabel& label = graph.labels()[label_id];
    if (!label.filler) {
      WordInterval w;
      w.token = label.token;
      w.start_s = static_cast<double>(prev_boundary_frame + 1) / rate;
      w.end_s = static_cast<double>(frame + 1) / rate;
      w.label_position = label.position;
      hyp.words.push_back(std::move(w));
    }
    prev_boundary_frame = frame;
  }
  return hyp;
}

}  // namespace decode
}  // namespace alta
