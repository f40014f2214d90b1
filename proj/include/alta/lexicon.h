// include/alta/lexicon.h

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

#ifndef ALTA_LEXICON_H_
#define ALTA_LEXICON_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace alta {

namespace lm {
struct LyricsDocument;
}

namespace lex {

// Reserved acoustic symbols. Never produced by g2p for real words.
inline const std::string kSilSymbol = "SIL";
inline const std::string kNseSymbol = "NSE";

// Pseudo-word inserted at lyric line boundaries; maps to the noise unit.
inline const std::string kNoiseWord = "<NOISE>";

using Pronunciation = std::vector<std::string>;

enum class EntrySource { kDictionary, kG2p };

struct LexiconEntry {
  std::vector<Pronunciation> pronunciations;
  EntrySource source = EntrySource::kDictionary;
};

// Uppercase, strip everything but A-Z and apostrophes, then drop leading and
// trailing apostrophes. Returns "" when nothing survives (caller drops the
// token). The reserved noise tag passes through unchanged.
std::string normalize_word(const std::string& raw);

// Longest-match-first grapheme rewrite table. Rules are total: every letter
// a-z has at least a single-letter fallback, so any normalized word converts.
class G2pRules {
 public:
  // Shipped English defaults: common digraph clusters plus a-z fallbacks.
  static G2pRules defaults();

  // One rule per line: "cluster<TAB>PH1 PH2 ...". '#' starts a comment.
  static G2pRules from_stream(std::istream& in);
  static G2pRules from_file(const std::string& path);

  void add_rule(const std::string& cluster, Pronunciation phones);

  // Longest matching cluster at each position; adjacent duplicate phonemes
  // produced by letter repetition are collapsed.
  Pronunciation convert(const std::string& normalized_word) const;

  bool covers_alphabet() const;

 private:
  // cluster (lowercase) -> phonemes; scanned longest-first.
  std::map<std::string, Pronunciation> rules_;
  size_t max_cluster_len_ = 0;
};

class Lexicon {
 public:
  // Adds a pronunciation; duplicate words accumulate alternatives.
  void add(const std::string& word, Pronunciation pron, EntrySource source);

  bool contains(const std::string& word) const;
  const std::vector<Pronunciation>& pronunciations(const std::string& word) const;
  EntrySource source(const std::string& word) const;
  size_t size() const { return entries_.size(); }

  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }

  // Every phoneme symbol referenced by any pronunciation.
  std::vector<std::string> phoneme_inventory() const;

 private:
  std::map<std::string, LexiconEntry> entries_;
};

// Parses "WORD PH1 PH2 ..." lines; '#' comments and blank lines are skipped.
// Words are normalized; stress digits on phonemes (CMU style) are stripped.
// Throws ParseError (with line number) on lines lacking phonemes.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::string& path);

// Grapheme-to-phoneme fallback for one normalized word.
Pronunciation g2p_fallback(const std::string& word, const G2pRules& rules);

// Returns a lexicon that covers every word type of the document: dictionary
// entries are kept as-is, OOV words get one g2p pronunciation, and the noise
// word maps to exactly [NSE].
Lexicon extend_for_lyrics(const Lexicon& base, const lm::LyricsDocument& doc, const G2pRules& rules);

}  // namespace lex
}  // namespace alta

#endif  // ALTA_LEXICON_H_
