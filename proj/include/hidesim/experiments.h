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

#ifndef HIDESIM_EXPERIMENTS_H_
#define HIDESIM_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hidesim/attacks.h"
#include "hidesim/config.h"
#include "hidesim/corpus.h"
#include "hidesim/fedsim.h"
#include "hidesim/metrics.h"

namespace hidesim {

// The three splits of an experiment plus the training vocabulary.
struct Corpora {
  Dataset train;
  Dataset test;
  // Unlabeled.
  Dataset pub;
  Vocab vocab;
  EncodedDataset train_encoded;
  EncodedDataset test_encoded;
  std::vector<TokenIds> public_tokens;
};

// Reads the TSV splits named in the config, generating any that are unset.
Corpora LoadCorpora(const ExperimentConfig& config);

// Drops sentences whose encoder input coincides with an earlier one. The
// encoder mean-pools token embeddings, so the key is the bag of token ids with
// counts divided by their gcd.
Dataset DedupByEncoderInput(const Dataset& dataset, const Vocab& vocab);

// "baseline", or the scheme tag with its (m, k), e.g. TextHide_intra[m=256 k=4].
std::string SchemeLabel(const TextHideParams& hide);

struct TrainOutcome {
  TrainSetup setup;
  TrainResult result;
  double accuracy = 0.0;
};

TrainOutcome TrainModel(const ExperimentConfig& config, const Corpora& corpora,
                        const TrainOptions& options);

// Hides encoded sentences the way a client running `hide` would, in batches
// of the configured size, with an attacker-simulated pool drawn from
// `stream`. Row i of the result has sentence i in its first slot.
std::vector<DenseVec> HideSentences(const TextHideParams& hide, int batch_size,
                                    const Params& params, std::span<const TokenIds> tokens,
                                    std::span<const int> labels,
                                    std::span<const TokenIds> public_tokens, RngStream& stream);

struct QueryRecord {
  int query = 0;
  std::int64_t truth_id = 0;
  std::optional<std::int64_t> answer_id;
  std::string truth_text;
  std::string answer_text;
  double similarity = 0.0;
  MetricsRow metrics;
  // Set when the attack produced no answer; the metrics row is then zero.
  std::string error;
};

struct SearchReport {
  std::string scheme;
  std::string semantic_scorer;
  MetricsSummary attack;
  MetricsSummary random;
  std::size_t index_size = 0;
  std::vector<QueryRecord> queries;
  // RepRecon only.
  std::vector<double> epoch_losses;
  double final_train_loss = 0.0;
};

// Similarity search against the deduplicated train split encoded with the
// unencrypted encoder of `params`.
SearchReport RunRssExperiment(const ExperimentConfig& config, const Corpora& corpora,
                              const Params& params, int workers);

// Reconstruction net trained on (hidden, raw) train pairs, then similarity
// search over train and test for reconstructed test queries.
SearchReport RunReconExperiment(const ExperimentConfig& config, const Corpora& corpora,
                                const Params& params, int workers);

struct SubsetSumInstance {
  int instance = 0;
  std::vector<int> planted;
  std::optional<std::vector<int>> recovered;
  std::uint64_t candidates = 0;
  bool success = false;
  double max_abs_error = 0.0;
};

struct SubsetSumReport {
  SubsetSumConfig config;
  std::uint64_t expected_candidates = 0;
  double success_rate = 0.0;
  std::vector<SubsetSumInstance> instances;
};

SubsetSumReport RunSubsetSumExperiment(const SubsetSumConfig& config, std::uint64_t seed,
                                       int workers);

// Report files. Line-oriented files embed the config hash and seed; CSV files
// get a <name>.meta.json sidecar.
struct ReportContext {
  std::string config_hash;
  std::uint64_t seed = 0;
};

// On resume, lines of an existing rounds.jsonl for earlier rounds are kept.
void WriteTrainReports(const std::filesystem::path& dir, const ReportContext& ctx,
                       const TrainOutcome& outcome);
void WriteGradMatchReports(const std::filesystem::path& dir, const ReportContext& ctx,
                           std::span<const CellResult> cells);
void WriteSearchReports(const std::filesystem::path& dir, const std::string& prefix,
                        const ReportContext& ctx, const SearchReport& report);
void WriteSubsetSumReports(const std::filesystem::path& dir, const ReportContext& ctx,
                           const SubsetSumReport& report);
void WriteCorpusStats(const std::filesystem::path& path, const ReportContext& ctx,
                      const Dataset& dataset, const Vocab& vocab);

struct MergeResult {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::string> warnings;
};

// Collects every CSV under `dir` (recursively) into summary.csv in long form
// (file, config_hash, seed, row, column, value). Mismatched config hashes are
// recorded in summary_warnings.txt. Throws ConfigError when there is nothing
// to merge.
MergeResult MergeReports(const std::filesystem::path& dir);

}  // namespace hidesim

#endif  // HIDESIM_EXPERIMENTS_H_
