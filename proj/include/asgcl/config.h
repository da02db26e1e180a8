// Copyright 2026 The asgcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASGCL_CONFIG_H_
#define ASGCL_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "asgcl/io.h"
#include "asgcl/trainer.h"

namespace asgcl {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct EvalSettings {
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4};
  std::string task = "classification";  // classification | clustering | both
  bool raw_baseline = false;            // also score the raw feature matrix

  friend bool operator==(const EvalSettings&, const EvalSettings&) = default;
};

struct SpectraSettings {
  std::vector<double> budgets = {0.2};
  int seeds = 10;

  friend bool operator==(const SpectraSettings&, const SpectraSettings&) = default;
};

struct RobustnessSettings {
  std::vector<double> ratios = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  bool retrain = false;

  friend bool operator==(const RobustnessSettings&,
                         const RobustnessSettings&) = default;
};

struct SweepSettings {
  std::vector<double> budgets = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<int> extra_diffusions = {0, 1, 2, 3, 4};
  std::vector<double> alphas = {4.0, 5.0, 6.0};
  std::vector<double> betas = {8.0, 9.0, 10.0};

  friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

// Everything a CLI run needs. Every JSON key is optional; unknown keys are
// rejected.
struct RunConfig {
  DatasetSpec dataset;
  TrainConfig train;
  EvalSettings eval;
  SpectraSettings spectra;
  RobustnessSettings robustness;
  SweepSettings sweep;
  std::string out = "asgcl_out";

  void validate() const;  // throws ConfigError
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& cfg);
// Throws ConfigError on type errors, unknown keys or invalid values.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace asgcl

#endif  // ASGCL_CONFIG_H_
