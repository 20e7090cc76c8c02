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
#ifndef HIDESIM_FEDSIM_H_
#define HIDESIM_FEDSIM_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hidesim/corpus.h"
#include "hidesim/model.h"
#include "hidesim/optim.h"
#include "hidesim/rng.h"
#include "hidesim/texthide.h"

namespace hidesim {

enum class HideVariant { kIntra, kInter };
enum class MaskSchedule { kPerEpoch, kPerBatch };
enum class OptimizerMode { kSgd, kAdam };
// kPlain classifies raw representations. kKeyed lets the data owner apply its
// own masks: class probabilities are averaged over every mask the clients hold
// (one fresh mask per example in the unbounded mode). Both agree when no mask
// is in use.
enum class EvalMode { kPlain, kKeyed };

struct TextHideParams {
  // When false the encryption step is bypassed entirely (plain fine-tuning).
  bool enabled = true;
  // Total pool size across all clients; 0 means no masking.
  int m = 0;
  // A fresh mask for every use instead of a pool (the m = infinity setting).
  bool fresh_masks = false;
  int k = 1;
  HideVariant variant = HideVariant::kIntra;
  MaskSchedule schedule = MaskSchedule::kPerEpoch;
  EvalMode eval_mode = EvalMode::kKeyed;

  // "baseline", "TextHide_intra" or "TextHide_inter".
  std::string SchemeTag() const;
};

struct FedParams {
  int clients = 1;
  int rounds = 500;
  int batch_size = 32;
  double learning_rate = 0.01;
  OptimizerMode optimizer = OptimizerMode::kAdam;
  double weight_decay = 0.0;
  // Evaluate every this many rounds (and after the last); 0 disables.
  int eval_every = 50;
  // Write a checkpoint every this many rounds; 0 disables.
  int checkpoint_every = 0;
};

struct TrainSetup {
  std::uint64_t seed = 1;
  ModelDims dims;
  TextHideParams hide;
  FedParams fed;
};

// A labeled dataset resolved against the model vocabulary.
struct EncodedDataset {
  std::vector<std::int64_t> ids;
  std::vector<TokenIds> tokens;
  std::vector<int> labels;
  std::size_t size() const { return tokens.size(); }
};

EncodedDataset EncodeDataset(const Dataset& dataset, const Vocab& vocab);

struct ClientState {
  int id = 0;
  EncodedDataset data;
  MaskPool pool;
  RngStream stream;
  // Public representation cache for the inter variant, refreshed per epoch
  // from a snapshot of the encoder.
  std::int64_t cache_epoch = -1;
  std::vector<double> cache_encoder;
  std::vector<DenseVec> public_cache;
};

struct ServerState {
  Params params;
  int round = 0;
  int total_rounds = 0;
  double learning_rate = 0.0;
  OptimizerMode mode = OptimizerMode::kAdam;
  AdamState optimizer;
};

// Everything a client sends to the server for one round.
struct ClientUpdate {
  Gradients grads;
  double loss = 0.0;
};

// The wire form of a client update (round-trip traffic for inspection).
std::vector<std::uint8_t> SerializeClientUpdate(const ClientUpdate& update);

struct RoundLog {
  int round = 0;
  double loss = 0.0;
  std::optional<double> accuracy;
  std::vector<double> grad_norms;
};

std::string RoundLogJson(const RoundLog& log, const std::string& config_hash);

// Deals the private data round-robin over clients in a seeded shuffled order
// and splits the total mask budget so that the pools partition it. Throws ConfigError when 0 < m < clients.
std::vector<ClientState> MakeClients(const TrainSetup& setup, const EncodedDataset& data);

// Epoch of a round for a client with n examples.
std::int64_t EpochOf(int round, std::size_t n, int batch_size);

// One client's round: sample a batch, encode, hide, backpropagate. Only the
// gradients and the batch loss leave this function.
ClientUpdate RunClientUpdate(ClientState& client, const Params& params, const TrainSetup& setup,
                             int round, std::span<const TokenIds> public_tokens);

// Averages the client gradients and applies them. Throws ConfigError unless
// exactly `clients` updates are given.
void ServerRound(ServerState& server, std::span<const Gradients> grads, int clients);

// Fraction of argmax-correct predictions on unencrypted inputs.
double Evaluate(const Params& params, const EncodedDataset& data);
// Accuracy when each example is classified under the given masks with
// averaged probabilities. An empty mask list is plain evaluation.
double EvaluateKeyed(const Params& params, const EncodedDataset& data,
                     std::span<const DenseVec> masks);

struct TrainOptions {
  int workers = 1;
  std::string config_hash;
  // Checkpoints go here when the cadence is set.
  std::optional<std::filesystem::path> checkpoint_dir;
  std::optional<std::filesystem::path> resume_from;
  // Called once per completed round.
  std::function<void(const RoundLog&)> on_round;
};

struct TrainResult {
  ServerState server;
  std::vector<ClientState> clients;
  std::vector<RoundLog> logs;
};

// Runs rounds [start, T) of federated training. `public_tokens` is required for
// the inter variant; `eval_data` may be empty to skip evaluation.
TrainResult RunTraining(const TrainSetup& setup, const EncodedDataset& train,
                        const EncodedDataset& eval_data, std::span<const TokenIds> public_tokens,
                        const TrainOptions& options);

// Held-out accuracy under the setup's evaluation mode (keyed evaluation
// averages over the clients' masks).
double EvaluateTrained(const TrainSetup& setup, const TrainResult& state,
                       const EncodedDataset& data);

// Checkpoint of the full resumable training state.
void WriteTrainingCheckpoint(const std::filesystem::path& path, const TrainResult& state,
                             const std::string& config_hash);
std::vector<std::uint8_t> SerializeTrainingState(const TrainResult& state);

}  // namespace hidesim

#endif  // HIDESIM_FEDSIM_H_
