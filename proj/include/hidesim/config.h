// Copyright 2026 The HideSim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIDESIM_CONFIG_H_
#define HIDESIM_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hidesim/attacks.h"
#include "hidesim/corpus.h"
#include "hidesim/fedsim.h"

namespace hidesim {

struct CorpusConfig {
  // TSV paths; when unset the synthetic generator fills the split.
  std::optional<std::string> train_path;
  std::optional<std::string> test_path;
  std::optional<std::string> public_path;
  SyntheticParams synthetic;
  int test_per_class = 250;
  int public_per_class = 250;
};

struct GradMatchConfig {
  AttackConfig attack;
  VictimModel victim;
  std::vector<GradMatchCell> grid = {{1, 4, false}, {1, 4, true}, {1, 16, true}, {1, 64, true},
                                     {2, 4, true},  {2, 16, true}, {2, 64, true}};
};

struct RssConfig {
  int queries = 1000;
};

struct ReconExperimentConfig {
  ReconConfig net{.hidden = 256};
  int queries = 500;
  // Hidden copies drawn per training sentence.
  int pairs_per_sentence = 4;
};

struct SubsetSumConfig {
  int n = 16;
  int k = 2;
  int dim = 8;
  int instances = 10;
  bool early_exit = false;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  CorpusConfig corpus;
  ModelDims model;
  TextHideParams texthide;
  FedParams federated;
  GradMatchConfig grad_match;
  RssConfig rss;
  ReconExperimentConfig reprecon;
  SubsetSumConfig subset_sum;
  std::string output_dir = "out";
};

// Strict JSON: unknown keys and wrong types raise ConfigError naming the key
// path. Missing keys keep their defaults. Invariants (m >= 0, k >= 1, ...)
// are checked.
ExperimentConfig ParseConfig(const std::string& json_text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
// Canonical JSON with every field spelled out.
std::string DumpConfig(const ExperimentConfig& config);
// FNV-1a 64 of the canonical dump, as 16 hex digits.
// FNV-1a 64 of the canonical dump with output_dir cleared, as 16 hex digits.
std::string ConfigHash(const ExperimentConfig& config);
void ValidateConfig(const ExperimentConfig& config);

TrainSetup MakeTrainSetup(const ExperimentConfig& config, int vocab_size);

}  // namespace hidesim

#endif  // HIDESIM_CONFIG_H_
