// src/lexicon.cc

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

#include "alta/lexicon.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "alta/errors.h"
#include "alta/lyrics_lm.h"

namespace alta {
namespace lex {

std::string normalize_word(const std::string& raw) {
  if (raw == kNoiseWord) return raw;
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (std::isalpha(c)) out.push_back(static_cast<char>(std::toupper(c)));
    else if (c == '\'') out.push_back('\'');
  }
  size_t first = out.find_first_not_of('\'');
  if (first == std::string::npos) return "";
  size_t last = out.find_last_not_of('\'');
  return out.substr(first, last - first + 1);
}

// ---------------------------------------------------------------------------
// G2pRules

G2pRules G2pRules::defaults() {
  G2pRules r;
  // Digraph / trigraph clusters, longest matched first by construction.
  r.add_rule("tch", {"CH"});
  r.add_rule("igh", {"AY"});
  r.add_rule("ch", {"CH"});
  r.add_rule("sh", {"SH"});
  r.add_rule("th", {"TH"});
  r.add_rule("ph", {"F"});
  r.add_rule("wh", {"W"});
  r.add_rule("ck", {"K"});
  r.add_rule("ng", {"NG"});
  r.add_rule("qu", {"K", "W"});
  r.add_rule("oo", {"UW"});
  r.add_rule("ee", {"IY"});
  r.add_rule("ea", {"IY"});
  r.add_rule("ai", {"EY"});
  r.add_rule("ay", {"EY"});
  r.add_rule("oa", {"OW"});
  r.add_rule("ou", {"AW"});
  r.add_rule("ow", {"OW"});
  r.add_rule("oy", {"OY"});
  r.add_rule("oi", {"OY"});
  r.add_rule("au", {"AO"});
  r.add_rule("aw", {"AO"});
  r.add_rule("ar", {"AA", "R"});
  r.add_rule("or", {"AO", "R"});
  r.add_rule("er", {"ER"});
  r.add_rule("ir", {"ER"});
  r.add_rule("ur", {"ER"});
  // Single-letter fallbacks; keep the table total over a-z.
  r.add_rule("a", {"AA"});
  r.add_rule("b", {"B"});
  r.add_rule("c", {"K"});
  r.add_rule("d", {"D"});
  r.add_rule("e", {"EH"});
  r.add_rule("f", {"F"});
  r.add_rule("g", {"G"});
  r.add_rule("h", {"HH"});
  r.add_rule("i", {"IH"});
  r.add_rule("j", {"JH"});
  r.add_rule("k", {"K"});
  r.add_rule("l", {"L"});
  r.add_rule("m", {"M"});
  r.add_rule("n", {"N"});
  r.add_rule("o", {"OW"});
  r.add_rule("p", {"P"});
  r.add_rule("q", {"K"});
  r.add_rule("r", {"R"});
  r.add_rule("s", {"S"});
  r.add_rule("t", {"T"});
  r.add_rule("u", {"AH"});
  r.add_rule("v", {"V"});
  r.add_rule("w", {"W"});
  r.add_rule("x", {"K", "S"});
  r.add_rule("y", {"IY"});
  r.add_rule("z", {"Z"});
  return r;
}

G2pRules G2pRules::from_stream(std::istream& in) {
  G2pRules r;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("g2p rule missing TAB separator", line_no);
    std::string cluster = line.substr(0, tab);
    std::istringstream phones(line.substr(tab + 1));
    Pronunciation pron;
    std::string p;
    while (phones >> p) {
      std::transform(p.begin(), p.end(), p.begin(), ::toupper);
      pron.push_back(p);
    }
    if (cluster.empty() || pron.empty()) throw ParseError("g2p rule needs a cluster and phonemes", line_no);
    std::transform(cluster.begin(), cluster.end(), cluster.begin(), ::tolower);
    r.add_rule(cluster, std::move(pron));
  }
  if (!r.covers_alphabet()) {
    // Rules must stay total; fill gaps from the shipped table.
    G2pRules def = defaults();
    for (char c = 'a'; c <= 'z'; ++c) {
      std::string key(1, c);
      if (!r.rules_.count(key)) r.add_rule(key, def.rules_.at(key));
    }
  }
  return r;
}

G2pRules G2pRules::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open g2p rules file: " + path);
  return from_stream(in);
}

void G2pRules::add_rule(const std::string& cluster, Pronunciation phones) {
  for (const auto& p : phones)
    if (p == kSilSymbol || p == kNseSymbol)
      throw InputError("g2p rules may not produce reserved symbol " + p);
  max_cluster_len_ = std::max(max_cluster_len_, cluster.size());
  rules_[cluster] = std::move(phones);
}

bool G2pRules::covers_alphabet() const {
  for (char c = 'a'; c <= 'z'; ++c)
    if (!rules_.count(std::string(1, c))) return false;
  return true;
}

Pronunciation G2pRules::convert(const std::string& normalized_word) const {
  std::string word;
  word.reserve(normalized_word.size());
  for (unsigned char c : normalized_word)
    if (std::isalpha(c)) word.push_back(static_cast<char>(std::tolower(c)));

  Pronunciation out;
  size_t pos = 0;
  while (pos < word.size()) {
    size_t try_len = std::min(max_cluster_len_, word.size() - pos);
    bool matched = false;
    for (size_t len = try_len; len >= 1; --len) {
      auto it = rules_.find(word.substr(pos, len));
      if (it != rules_.end()) {
        for (const auto& p : it->second) {
          if (!out.empty() && out.back() == p) continue;  // collapse repeats
          out.push_back(p);
        }
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++pos;  // untranslatable character, skip
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexicon

void Lexicon::add(const std::string& word, Pronunciation pron, EntrySource source) {
  if (pron.empty()) throw InputError("empty pronunciation for word " + word);
  auto& entry = entries_[word];
  if (entry.pronunciations.empty()) entry.source = source;
  entry.pronunciations.push_back(std::move(pron));
}

bool Lexicon::contains(const std::string& word) const { return entries_.count(word) > 0; }

const std::vector<Pronunciation>& Lexicon::pronunciations(const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw MissingPronunciation("no pronunciation for word " + word);
  return it->second.pronunciations;
}

EntrySource Lexicon::source(const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw MissingPronunciation("no pronunciation for word " + word);
  return it->second.source;
}

std::vector<std::string> Lexicon::phoneme_inventory() const {
  std::set<std::string> phones;
  for (const auto& [word, entry] : entries_)
    for (const auto& pron : entry.pronunciations)
      for (const auto& p : pron) phones.insert(p);
  return {phones.begin(), phones.end()};
}

Lexicon load_lexicon(std::istream& in) {
  Lexicon lex;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    Pronunciation pron;
    std::string phone;
    while (fields >> phone) {
      std::transform(phone.begin(), phone.end(), phone.begin(), ::toupper);
      // CMU-style stress digits are dropped.
      while (!phone.empty() && std::isdigit(static_cast<unsigned char>(phone.back()))) phone.pop_back();
      if (!phone.empty()) pron.push_back(phone);
    }
    if (pron.empty()) throw ParseError("lexicon entry without phonemes: " + word, line_no);
    std::string normalized = normalize_word(word);
    if (normalized.empty()) throw ParseError("lexicon word empty after normalization: " + word, line_no);
    if (normalized == kNoiseWord) throw ParseError("the noise tag is reserved and cannot be redefined", line_no);
    lex.add(normalized, std::move(pron), EntrySource::kDictionary);
  }
  return lex;
}

Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file: " + path);
  return load_lexicon(in);
}

Pronunciation g2p_fallback(const std::string& word, const G2pRules& rules) {
  if (word.empty()) throw InputError("g2p on empty word");
  Pronunciation pron = rules.convert(word);
  if (pron.empty()) throw InputError("g2p produced no phonemes for word " + word);
  return pron;
}

Lexicon extend_for_lyrics(const Lexicon& base, const lm::LyricsDocument& doc, const G2pRules& rules) {
  Lexicon extended = base;
  for (const auto& fw : doc.flat_words) {
    if (extended.contains(fw.token)) continue;
    extended.add(fw.token, g2p_fallback(fw.token, rules), EntrySource::kG2p);
  }
  if (!extended.contains(kNoiseWord))
    extended.add(kNoiseWord, {kNseSymbol}, EntrySource::kDictionary);
  return extended;
}

}  // namespace lex
}  // namespace alta
