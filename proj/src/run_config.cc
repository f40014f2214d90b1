// src/run_config.cc

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

#include "alta/run_config.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "alta/errors.h"

namespace alta {

void RunConfig::validate() const {
  if (tau_silence_s <= 0.0) throw InputError("tau_silence_s must be positive");
  if (tau_max_s <= tau_silence_s) throw InputError("tau_max_s must exceed tau_silence_s");
  if (vad_threshold_fraction <= 0.0 || vad_threshold_fraction >= 1.0)
    throw InputError("vad_threshold_fraction must lie in (0, 1)");
  if (hop_s <= 0.0 || hop_s > frame_len_s) throw InputError("need 0 < hop_s <= frame_len_s");
  if (energy_floor <= 0.0) throw InputError("energy_floor must be positive");
  if (n_anchor < 1) throw InputError("n_anchor must be >= 1");
  if (n_segment < 2) throw InputError("n_segment must be >= 2");
  if (lm_order < 1) throw InputError("lm_order must be >= 1");
  if (lm_backoff_penalty >= 0.0) throw InputError("lm_backoff_penalty must be negative");
  if (beam <= 0.0 || retry_beam <= beam) throw InputError("need retry_beam > beam > 0");
  if (pcs_tolerance_s <= 0.0) throw InputError("pcs_tolerance_s must be positive");
  if (ae_convention != "start" && ae_convention != "midpoint")
    throw InputError("ae_convention must be 'start' or 'midpoint'");
  if (jobs < 0) throw InputError("jobs must be >= 0");
}

metrics::AeConvention RunConfig::ae() const {
  return ae_convention == "midpoint" ? metrics::AeConvention::kMidpoint : metrics::AeConvention::kStartTime;
}

void RunConfig::apply_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "tau_silence_s") tau_silence_s = value.get<double>();
      else if (key == "tau_max_s") tau_max_s = value.get<double>();
      else if (key == "vad_threshold_fraction") vad_threshold_fraction = value.get<double>();
      else if (key == "frame_len_s") frame_len_s = value.get<double>();
      else if (key == "hop_s") hop_s = value.get<double>();
      else if (key == "energy_floor") energy_floor = value.get<double>();
      else if (key == "n_anchor") n_anchor = value.get<int>();
      else if (key == "n_segment") n_segment = value.get<int>();
      else if (key == "lm_order") lm_order = value.get<int>();
      else if (key == "lm_backoff_penalty") lm_backoff_penalty = value.get<double>();
      else if (key == "beam") beam = value.get<double>();
      else if (key == "retry_beam") retry_beam = value.get<double>();
      else if (key == "pcs_tolerance_s") pcs_tolerance_s = value.get<double>();
      else if (key == "ae_convention") ae_convention = value.get<std::string>();
      else if (key == "g2p_rules_path") g2p_rules_path = value.get<std::string>();
      else if (key == "jobs") jobs = value.get<int>();
      else throw InputError("unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config value has wrong type: ") + e.what());
  }
  validate();
}

void RunConfig::apply_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_json_text(ss.str());
}

std::string RunConfig::to_json() const {
  nlohmann::json j{{"tau_silence_s", tau_silence_s},
                   {"tau_max_s", tau_max_s},
                   {"vad_threshold_fraction", vad_threshold_fraction},
                   {"frame_len_s", frame_len_s},
                   {"hop_s", hop_s},
                   {"energy_floor", energy_floor},
                   {"n_anchor", n_anchor},
                   {"n_segment", n_segment},
                   {"lm_order", lm_order},
                   {"lm_backoff_penalty", lm_backoff_penalty},
                   {"beam", beam},
                   {"retry_beam", retry_beam},
                   {"pcs_tolerance_s", pcs_tolerance_s},
                   {"ae_convention", ae_convention},
                   {"g2p_rules_path", g2p_rules_path},
                   {"jobs", jobs}};
  return j.dump(2);
}

}  // namespace alta
