// include/alta/run_config.h

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

#ifndef ALTA_RUN_CONFIG_H_
#define ALTA_RUN_CONFIG_H_

#include <string>

#include "alta/metrics.h"

namespace alta {

// Every tunable in one place, with the published defaults. A JSON config file
// with the same flat keys overrides defaults; command-line flags override the
// file. Unknown keys are rejected.
struct RunConfig {
  // voice activity
  double tau_silence_s = 0.8;
  double tau_max_s = 6.0;
  double vad_threshold_fraction = 0.3;
  double frame_len_s = 0.025;
  double hop_s = 0.010;
  double energy_floor = 1e-10;

  // anchoring and segmentation
  int n_anchor = 5;
  int n_segment = 12;

  // biased language model
  int lm_order = 20;
  double lm_backoff_penalty = -9.210340371976182;  // ln 1e-4

  // decoding
  double beam = 30.0;
  double retry_beam = 300.0;

  // evaluation
  double pcs_tolerance_s = 0.3;
  std::string ae_convention = "start";  // or "midpoint"

  std::string g2p_rules_path;
  int jobs = 0;  // 0 = hardware concurrency

  void validate() const;
  metrics::AeConvention ae() const;

  // Applies the file's keys on top of *this. Throws InputError on unknown
  // keys or type mismatches.
  void apply_json_file(const std::string& path);
  void apply_json_text(const std::string& text);

  std::string to_json() const;
};

}  // namespace alta

#endif  // ALTA_RUN_CONFIG_H_
