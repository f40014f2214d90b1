// src/metrics.cc

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

#include "alta/metrics.h"

#include <algorithm>
#include <cmath>

#include "alta/anchoring.h"
#include "alta/errors.h"

namespace alta {
namespace metrics {

AlignmentReport alignment_report(const std::vector<TimedWord>& ref,
                                 const std::vector<TimedWord>& hyp,
                                 double tolerance_s,
                                 AeConvention convention) {
  if (ref.size() != hyp.size())
    throw IndexMismatch("reference and hypothesis cover different word counts: " +
                        std::to_string(ref.size()) + " vs " + std::to_string(hyp.size()));
  if (ref.empty()) throw EmptyReference("no words to evaluate");

  AlignmentReport report;
  report.tolerance_s = tolerance_s;
  int within = 0;
  double sum = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    if (ref[i].token != hyp[i].token)
      throw IndexMismatch("word mismatch at index " + std::to_string(i) + ": " + ref[i].token + " vs " + hyp[i].token);
    double r = convention == AeConvention::kStartTime ? ref[i].start_s : 0.5 * (ref[i].start_s + ref[i].end_s);
    double h = convention == AeConvention::kStartTime ? hyp[i].start_s : 0.5 * (hyp[i].start_s + hyp[i].end_s);
    double ae = std::abs(h - r);
    report.per_word_ae_s.push_back(ae);
    sum += ae;
    if (ae <= tolerance_s) ++within;
  }
  report.mean_ae_s = sum / static_cast<double>(ref.size());
  std::vector<double> sorted = report.per_word_ae_s;
  std::sort(sorted.begin(), sorted.end());
  report.median_ae_s = sorted[(sorted.size() - 1) / 2];
  report.pcs = static_cast<double>(within) / static_cast<double>(ref.size());
  return report;
}

TranscriptionReport wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) throw EmptyReference("empty reference for word error rate");
  TranscriptionReport report;
  auto labels = anchor::align_words(ref, hyp);
  for (const auto& l : labels) {
    switch (l.op) {
      case anchor::EditOp::kSubstitution: ++report.word_substitutions; break;
      case anchor::EditOp::kDeletion: ++report.word_deletions; break;
      case anchor::EditOp::kInsertion: ++report.word_insertions; break;
      case anchor::EditOp::kCorrect: break;
    }
  }
  report.word_ref_len = static_cast<int>(ref.size());
  report.wer = static_cast<double>(report.word_substitutions + report.word_deletions + report.word_insertions) /
               static_cast<double>(report.word_ref_len);
  return report;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

int char_edit_distance(const std::string& a, const std::string& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j)
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

TranscriptionReport cer(const std::vector<std::string>& ref_tokens, const std::vector<std::string>& hyp_tokens) {
  std::string ref = join_tokens(ref_tokens);
  std::string hyp = join_tokens(hyp_tokens);
  if (ref.empty()) throw EmptyReference("empty reference for character error rate");
  TranscriptionReport report;
  report.char_edits = char_edit_distance(ref, hyp);
  report.char_ref_len = static_cast<int>(ref.size());
  report.cer = static_cast<double>(report.char_edits) / static_cast<double>(report.char_ref_len);
  return report;
}

TranscriptionReport transcription_report(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  TranscriptionReport report = wer(ref, hyp);
  TranscriptionReport chars = cer(ref, hyp);
  report.cer = chars.cer;
  report.char_edits = chars.char_edits;
  report.char_ref_len = chars.char_ref_len;
  return report;
}

}  // namespace metrics
}  // namespace alta
