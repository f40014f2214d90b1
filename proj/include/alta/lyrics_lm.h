// include/alta/lyrics_lm.h

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

#ifndef ALTA_LYRICS_LM_H_
#define ALTA_LYRICS_LM_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace alta {
namespace lm {

// One real lyric word with its position in the document.
struct FlatWord {
  std::string token;
  int line_index = 0;
  int word_index = 0;  // 0-based, gapless over real words
};

// Tokenized lyrics. Each non-empty line carries the noise tag at both ends;
// flat_words lists the real words only, in reading order.
struct LyricsDocument {
  std::vector<std::vector<std::string>> lines;
  std::vector<FlatWord> flat_words;
};

// Normalizes tokens, drops empties, tags every surviving line with the noise
// word at both ends. Throws EmptyLyrics when nothing survives.
LyricsDocument tokenize_lyrics(const std::string& text);

// Result of one LM query: log-probability plus the number of order drops the
// query had to take (each drop is taxed backoff_penalty once).
struct LmScore {
  double logp = 0.0;
  int backoff_drops = 0;
};

// Biased maximum-likelihood n-gram model over the document's own lines.
// Every line is an independent sentence; a begin marker bounds histories on
// the left. No smoothing: unseen continuations cost a fixed per-drop penalty.
class NGramModel {
 public:
  // History token that marks a sentence start in queries.
  static const std::string kSentenceBegin;

  int order() const { return order_; }
  double backoff_penalty() const { return backoff_penalty_; }

  bool in_vocabulary(const std::string& word) const;
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  // Longest stored suffix of `history` that has `word` as a continuation
  // decides the order used; each order drop below the usable history length
  // costs backoff_penalty. Throws UnknownWord for out-of-vocabulary words.
  LmScore score(const std::vector<std::string>& history, const std::string& word) const;
  double log_prob(const std::vector<std::string>& history, const std::string& word) const;

  // --- integer-id interface used by the decoder ---
  int token_id(const std::string& token) const;              // -1 if absent
  const std::string& token_text(int id) const;
  int begin_id() const { return begin_id_; }
  int vocab_size() const { return static_cast<int>(vocab_.size()); }

  LmScore score_ids(const std::vector<int>& history, int word_id) const;

  // Longest suffix of (history + word) that is a stored history; the decode
  // graph uses this as its language-model state transition.
  std::vector<int> next_history(const std::vector<int>& history, int word_id) const;

  bool is_stored_history(const std::vector<int>& history) const;

  // All stored histories (keys of the count maps), every order.
  std::vector<std::vector<int>> stored_histories() const;

  // Continuation distribution of one stored history, as (word_id, count).
  const std::map<int, int64_t>* continuations(const std::vector<int>& history) const;

  friend NGramModel build_ngram(const LyricsDocument& doc, int order, double backoff_penalty);

 private:
  struct VectorHash {
    size_t operator()(const std::vector<int>& v) const {
      size_t h = 1469598103934665603ull;
      for (int x : v) {
        h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  struct HistoryCounts {
    std::map<int, int64_t> continuation;  // word id -> count
    int64_t total = 0;
  };

  int order_ = 20;
  double backoff_penalty_ = 0.0;
  std::vector<std::string> vocab_;                    // id -> token (begin marker included)
  std::unordered_map<std::string, int> vocab_index_;  // token -> id
  int begin_id_ = -1;
  std::unordered_map<std::vector<int>, HistoryCounts, VectorHash> counts_;
};

// Default per-drop penalty: ln(1e-4). Heavily taxes any deviation from seen
// word order while keeping every vocabulary word reachable.
inline constexpr double kDefaultBackoffPenalty = -9.210340371976182;

NGramModel build_ngram(const LyricsDocument& doc, int order, double backoff_penalty = kDefaultBackoffPenalty);

}  // namespace lm
}  // namespace alta

#endif  // ALTA_LYRICS_LM_H_
