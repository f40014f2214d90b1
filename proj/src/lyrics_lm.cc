// src/lyrics_lm.cc

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

#include "alta/lyrics_lm.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alta/errors.h"
#include "alta/lexicon.h"

namespace alta {
namespace lm {

const std::string NGramModel::kSentenceBegin = "<s>";

LyricsDocument tokenize_lyrics(const std::string& text) {
  LyricsDocument doc;
  std::istringstream in(text);
  std::string raw_line;
  int word_index = 0;
  while (std::getline(in, raw_line)) {
    std::istringstream words(raw_line);
    std::vector<std::string> tokens;
    std::string raw;
    while (words >> raw) {
      std::string token = lex::normalize_word(raw);
      if (!token.empty()) tokens.push_back(token);
    }
    if (tokens.empty()) continue;

    int line_index = static_cast<int>(doc.lines.size());
    std::vector<std::string> line;
    line.reserve(tokens.size() + 2);
    line.push_back(lex::kNoiseWord);
    for (auto& t : tokens) {
      doc.flat_words.push_back({t, line_index, word_index++});
      line.push_back(std::move(t));
    }
    line.push_back(lex::kNoiseWord);
    doc.lines.push_back(std::move(line));
  }
  if (doc.flat_words.empty()) throw EmptyLyrics("no lyric tokens survived normalization");
  return doc;
}

// ---------------------------------------------------------------------------
// NGramModel

bool NGramModel::in_vocabulary(const std::string& word) const {
  auto it = vocab_index_.find(word);
  return it != vocab_index_.end() && it->second != begin_id_;
}

int NGramModel::token_id(const std::string& token) const {
  auto it = vocab_index_.find(token);
  return it == vocab_index_.end() ? -1 : it->second;
}

const std::string& NGramModel::token_text(int id) const { return vocab_.at(static_cast<size_t>(id)); }

LmScore NGramModel::score_ids(const std::vector<int>& history, int word_id) const {
  // Usable history is capped at order-1 tokens.
  size_t max_len = std::min(history.size(), static_cast<size_t>(order_ - 1));
  for (size_t len = max_len + 1; len-- > 0;) {
    std::vector<int> suffix(history.end() - len, history.end());
    auto it = counts_.find(suffix);
    if (it == counts_.end()) continue;
    auto cont = it->second.continuation.find(word_id);
    if (cont == it->second.continuation.end()) continue;
    LmScore s;
    s.backoff_drops = static_cast<int>(max_len - len);
    s.logp = s.backoff_drops * backoff_penalty_ +
             std::log(static_cast<double>(cont->second) / static_cast<double>(it->second.total));
    return s;
  }
  // No order stores the continuation at all (unreachable for vocabulary
  // words, which always have a unigram count).
  LmScore s;
  s.backoff_drops = static_cast<int>(max_len) + 1;
  s.logp = backoff_penalty_;
  return s;
}

LmScore NGramModel::score(const std::vector<std::string>& history, const std::string& word) const {
  auto it = vocab_index_.find(word);
  if (it == vocab_index_.end() || it->second == begin_id_)
    throw UnknownWord("word not in lyrics vocabulary: " + word);
  std::vector<int> hist_ids;
  hist_ids.reserve(history.size());
  for (const auto& h : history) {
    int id = token_id(h);
    if (id < 0) {
      // Unseen history tokens break any stored match left of this point.
      hist_ids.clear();
      continue;
    }
    hist_ids.push_back(id);
  }
  // Penalties are measured against the full query history length.
  size_t max_len = std::min(history.size(), static_cast<size_t>(order_ - 1));
  LmScore s = score_ids(hist_ids, it->second);
  size_t matched_len = std::min(hist_ids.size(), static_cast<size_t>(order_ - 1));
  s.backoff_drops += static_cast<int>(max_len - matched_len);
  s.logp += static_cast<double>(max_len - matched_len) * backoff_penalty_;
  return s;
}

double NGramModel::log_prob(const std::vector<std::string>& history, const std::string& word) const {
  return score(history, word).logp;
}

std::vector<int> NGramModel::next_history(const std::vector<int>& history, int word_id) const {
  std::vector<int> extended = history;
  extended.push_back(word_id);
  size_t max_len = std::min(extended.size(), static_cast<size_t>(order_ - 1));
  for (size_t len = max_len; len > 0; --len) {
    std::vector<int> suffix(extended.end() - len, extended.end());
    if (counts_.count(suffix)) return suffix;
  }
  return {};
}

bool NGramModel::is_stored_history(const std::vector<int>& history) const {
  return counts_.count(history) > 0;
}

std::vector<std::vector<int>> NGramModel::stored_histories() const {
  std::vector<std::vector<int>> out;
  out.reserve(counts_.size());
  for (const auto& [hist, counts] : counts_) out.push_back(hist);
  std::sort(out.begin(), out.end());
  return out;
}

const std::map<int, int64_t>* NGramModel::continuations(const std::vector<int>& history) const {
  auto it = counts_.find(history);
  return it == counts_.end() ? nullptr : &it->second.continuation;
}

NGramModel build_ngram(const LyricsDocument& doc, int order, double backoff_penalty) {
  if (order < 1) throw InputError("n-gram order must be >= 1");
  NGramModel model;
  model.order_ = order;
  model.backoff_penalty_ = backoff_penalty;

  auto intern = [&model](const std::string& token) {
    auto it = model.vocab_index_.find(token);
    if (it != model.vocab_index_.end()) return it->second;
    int id = static_cast<int>(model.vocab_.size());
    model.vocab_.push_back(token);
    model.vocab_index_.emplace(token, id);
    return id;
  };

  model.begin_id_ = intern(NGramModel::kSentenceBegin);
  for (const auto& line : doc.lines)
    for (const auto& token : line) intern(token);

  // Each line is one sentence. The begin marker participates in histories
  // only; it is never predicted, so it never appears as a continuation.
  for (const auto& line : doc.lines) {
    std::vector<int> seq;
    seq.reserve(line.size() + 1);
    seq.push_back(model.begin_id_);
    for (const auto& token : line) seq.push_back(model.vocab_index_.at(token));

    for (size_t i = 1; i < seq.size(); ++i) {
      int predicted = seq[i];
      size_t max_len = std::min(i, static_cast<size_t>(order - 1));
      for (size_t len = 0; len <= max_len; ++len) {
        std::vector<int> history(seq.begin() + (i - len), seq.begin() + i);
        auto& bucket = model.counts_[std::move(history)];
        bucket.continuation[predicted] += 1;
        bucket.total += 1;
      }
    }
  }
  return model;
}

}  // namespace lm
}  // namespace alta
