// include/alta/metrics.h

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

#ifndef ALTA_METRICS_H_
#define ALTA_METRICS_H_

#include <string>
#include <vector>

namespace alta {
namespace metrics {

enum class AeConvention { kStartTime, kMidpoint };

struct TimedWord {
  std::string token;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct AlignmentReport {
  double mean_ae_s = 0.0;
  double median_ae_s = 0.0;  // lower middle for even counts
  double pcs = 0.0;          // fraction of words within the tolerance window
  double tolerance_s = 0.3;
  std::vector<double> per_word_ae_s;
};

// Absolute word timing error against a reference covering the same words in
// the same order. Throws IndexMismatch when the two lists disagree in length
// or token sequence.
AlignmentReport alignment_report(const std::vector<TimedWord>& ref,
                                 const std::vector<TimedWord>& hyp,
                                 double tolerance_s = 0.3,
                                 AeConvention convention = AeConvention::kStartTime);

struct TranscriptionReport {
  double wer = 0.0;
  double cer = 0.0;
  int word_substitutions = 0;
  int word_deletions = 0;
  int word_insertions = 0;
  int word_ref_len = 0;
  int char_edits = 0;
  int char_ref_len = 0;
};

// Word error rate: minimum edit distance / reference length. Throws
// EmptyReference on an empty reference.
TranscriptionReport wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// Character error rate over space-joined normalized token streams; the
// joining spaces count as characters.
TranscriptionReport cer(const std::vector<std::string>& ref_tokens, const std::vector<std::string>& hyp_tokens);

// Both rates in one report.
TranscriptionReport transcription_report(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

}  // namespace metrics
}  // namespace alta

#endif  // ALTA_METRICS_H_
