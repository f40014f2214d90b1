// include/alta/anchoring.h

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

#ifndef ALTA_ANCHORING_H_
#define ALTA_ANCHORING_H_

#include <string>
#include <vector>

namespace alta {
namespace anchor {

enum class EditOp : char { kCorrect = 'C', kSubstitution = 'S', kDeletion = 'D', kInsertion = 'I' };

// One cell of the reference/hypothesis text alignment. Correct and
// substitution labels carry both indices; deletions carry the reference
// index only, insertions the hypothesis index only.
struct AlignLabel {
  EditOp op;
  int ref_index = -1;
  int hyp_index = -1;
};

// Minimum-edit-distance alignment with unit costs. Backtrace prefers
// match > substitution > deletion > insertion; labels come out in reference
// order. Empty inputs yield all-deletions or all-insertions.
std::vector<AlignLabel> align_words(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

int edit_distance(const std::vector<AlignLabel>& labels);

// Timing of one matched (anchor) word.
struct AnchorTiming {
  int ref_index = -1;
  int hyp_index = -1;
  double start_s = 0.0;
  double end_s = 0.0;
};

// A maximal run of consecutively matching words, consecutive in both the
// reference and the hypothesis, of length >= n_anchor.
struct AnchorRun {
  int ref_begin = 0;  // inclusive flat-word range
  int ref_end = 0;
  int hyp_begin = 0;  // inclusive hypothesis range
  int hyp_end = 0;
  std::vector<AnchorTiming> timings;  // one per word of the run, in order

  int length() const { return ref_end - ref_begin + 1; }
};

struct HypWordTiming {
  double start_s = 0.0;
  double end_s = 0.0;
};

// Extracts maximal runs of C labels with length >= n_anchor; every word of a
// qualifying run becomes an anchor word, timed from the hypothesis.
std::vector<AnchorRun> select_anchor_runs(const std::vector<AlignLabel>& labels,
                                          const std::vector<HypWordTiming>& hyp_timings,
                                          int n_anchor);

}  // namespace anchor
}  // namespace alta

#endif  // ALTA_ANCHORING_H_
