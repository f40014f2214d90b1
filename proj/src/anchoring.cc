// src/anchoring.cc

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

#include "alta/anchoring.h"

#include <algorithm>

#include "alta/errors.h"

namespace alta {
namespace anchor {

std::vector<AlignLabel> align_words(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const size_t n = ref.size(), m = hyp.size();
  // dist[i][j]: edit distance between ref[0..i) and hyp[0..j).
  std::vector<std::vector<int>> dist(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) dist[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) dist[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = dist[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      int del = dist[i - 1][j] + 1;
      int ins = dist[i][j - 1] + 1;
      dist[i][j] = std::min({diag, del, ins});
    }
  }

  // Backtrace, preferring match > substitution > deletion > insertion.
  std::vector<AlignLabel> labels;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && dist[i][j] == dist[i - 1][j - 1]) {
      labels.push_back({EditOp::kCorrect, static_cast<int>(i - 1), static_cast<int>(j - 1)});
      --i, --j;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] && dist[i][j] == dist[i - 1][j - 1] + 1) {
      labels.push_back({EditOp::kSubstitution, static_cast<int>(i - 1), static_cast<int>(j - 1)});
      --i, --j;
    } else if (i > 0 && dist[i][j] == dist[i - 1][j] + 1) {
      labels.push_back({EditOp::kDeletion, static_cast<int>(i - 1), -1});
      --i;
    } else {
      labels.push_back({EditOp::kInsertion, -1, static_cast<int>(j - 1)});
      --j;
    }
  }
  std::reverse(labels.begin(), labels.end());
  return labels;
}

int edit_distance(const std::vector<AlignLabel>& labels) {
  int d = 0;
  for (const auto& l : labels)
    if (l.op != EditOp::kCorrect) ++d;
  return d;
}

std::vector<AnchorRun> select_anchor_runs(const std::vector<AlignLabel>& labels,
                                          const std::vector<HypWordTiming>& hyp_timings,
                                          int n_anchor) {
  if (n_anchor < 1) throw InputError("n_anchor must be >= 1");
  std::vector<AnchorRun> runs;
  size_t i = 0;
  while (i < labels.size()) {
    if (labels[i].op != EditOp::kCorrect) {
      ++i;
      continue;
    }
    size_t j = i;
    // Consecutive C labels are consecutive in both sequences by construction
    // of the monotone alignment path.
    while (j + 1 < labels.size() && labels[j + 1].op == EditOp::kCorrect) ++j;
    int run_len = static_cast<int>(j - i + 1);
    if (run_len >= n_anchor) {
      AnchorRun run;
      run.ref_begin = labels[i].ref_index;
      run.ref_end = labels[j].ref_index;
      run.hyp_begin = labels[i].hyp_index;
      run.hyp_end = labels[j].hyp_index;
      for (size_t k = i; k <= j; ++k) {
        const AlignLabel& l = labels[k];
        if (static_cast<size_t>(l.hyp_index) >= hyp_timings.size())
          throw IndexMismatch("hypothesis timing missing for index " + std::to_string(l.hyp_index));
        const HypWordTiming& t = hyp_timings[l.hyp_index];
        run.timings.push_back({l.ref_index, l.hyp_index, t.start_s, t.end_s});
      }
      runs.push_back(std::move(run));
    }
    i = j + 1;
  }
  return runs;
}

}  // namespace anchor
}  // namespace alta
