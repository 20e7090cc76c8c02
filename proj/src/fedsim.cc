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

#include "hidesim/fedsim.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <utility>

#include "hidesim/errors.h"
#include "hidesim/parallel.h"
#include "json.hpp"

namespace hidesim {
namespace {

using Extras = std::map<std::string, std::vector<double>>;

constexpr int kFreshEvalMasks = 16;

std::string ClientKey(int client, const char* field) {
  return "client." + std::to_string(client) + "." + field;
}

void RefreshPublicCache(ClientState& client, std::span<const double> encoder,
                        const ModelDims& dims, std::span<const TokenIds> public_tokens) {
  Params snapshot(dims);
  std::copy(encoder.begin(), encoder.end(), snapshot.encoder().begin());
  client.cache_encoder.assign(encoder.begin(), encoder.end());
  client.public_cache.clear();
  client.public_cache.reserve(public_tokens.size());
  for (const TokenIds& ids : public_tokens) client.public_cache.push_back(Encode(snapshot, ids));
}

MaskAssignment ChooseMasks(const ClientState& client, const TrainSetup& setup, int round,
                           std::span<const std::int64_t> batch_ids, std::int64_t epoch) {
  const int b = static_cast<int>(batch_ids.size());
  const RngStream round_stream = client.stream.Child({"round", round});
  if (setup.hide.fresh_masks) {
    RngStream s = round_stream.Child({"fresh"});
    return DrawFreshMasks(setup.dims.rep_dim, b, s);
  }
  if (setup.hide.schedule == MaskSchedule::kPerBatch) {
    RngStream s = round_stream.Child({"mask"});
    return DrawPoolMasks(client.pool, b, s);
  }
  const auto indices =
      AssignEpochMasks(client.pool, batch_ids, epoch, client.stream.Child({"masks"}));
  return MasksFromIndices(client.pool, indices);
}

double Norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

template <typename T>
void AppendRaw(std::vector<std::uint8_t>& out, const T& value) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

Extras TrainingExtras(const TrainResult& state) {
  Extras extra;
  extra["state.round"] = {static_cast<double>(state.server.round)};
  if (state.server.mode == OptimizerMode::kAdam) {
    extra["adam.m"] = state.server.optimizer.first_moment;
    extra["adam.v"] = state.server.optimizer.second_moment;
    extra["adam.step"] = {static_cast<double>(state.server.optimizer.step)};
  }
  for (const ClientState& c : state.clients) {
    if (c.cache_epoch < 0) continue;
    extra[ClientKey(c.id, "cache_epoch")] = {static_cast<double>(c.cache_epoch)};
    extra[ClientKey(c.id, "cache_encoder")] = c.cache_encoder;
  }
  return extra;
}

const std::vector<double>& RequireExtra(const Extras& extra, const std::string& name) {
  const auto it = extra.find(name);
  if (it == extra.end()) throw ParseError("checkpoint is missing resume block '" + name + "'");
  return it->second;
}

}  // namespace

double EvaluateTrained(const TrainSetup& setup, const TrainResult& state,
                       const EncodedDataset& data) {
  if (!setup.hide.enabled || setup.hide.eval_mode == EvalMode::kPlain) {
    return Evaluate(state.server.params, data);
  }
  std::vector<DenseVec> masks;
  if (setup.hide.fresh_masks) {
    // No pool to hold on to; average over a fixed batch of fresh masks.
    RngStream s(setup.seed, {"eval", "fresh"});
    masks = DrawFreshMasks(setup.dims.rep_dim, kFreshEvalMasks, s).masks;
    return EvaluateKeyed(state.server.params, data, masks);
  }
  for (const ClientState& c : state.clients) {
    for (const Mask& m : c.pool.masks) masks.push_back(m.signs);
  }
  return EvaluateKeyed(state.server.params, data, masks);
}

std::string TextHideParams::SchemeTag() const {
  if (!enabled || (m == 0 && !fresh_masks && k == 1)) return "baseline";
  return variant == HideVariant::kInter ? "TextHide_inter" : "TextHide_intra";
}

EncodedDataset EncodeDataset(const Dataset& dataset, const Vocab& vocab) {
  EncodedDataset out;
  for (const Sentence& s : dataset.sentences) {
    TokenIds ids;
    ids.reserve(s.tokens.size());
    for (const auto& t : s.tokens) {
      const int index = vocab.IndexOrUnknown(t);
      if (index >= 0) ids.push_back(index);
    }
    if (ids.empty()) {
      throw ConfigError("sentence " + std::to_string(s.id) + " has no in-vocabulary tokens");
    }
    out.ids.push_back(s.id);
    out.tokens.push_back(std::move(ids));
    out.labels.push_back(s.label.value_or(-1));
  }
  return out;
}

std::vector<ClientState> MakeClients(const TrainSetup& setup, const EncodedDataset& data) {
  const int num_clients = setup.fed.clients;
  if (num_clients < 1) throw ConfigError("need at least one client");
  const int m = setup.hide.m;
  if (m < 0) throw ConfigError("mask pool size must be non-negative");
  if (m > 0 && m < num_clients) {
    throw ConfigError("mask pool size " + std::to_string(m) + " cannot be split across " +
                      std::to_string(num_clients) + " clients");
  }
  // Shuffle before dealing so that class-ordered data does not yield
  // single-class clients.
  RngStream partition_stream(setup.seed, {"partition"});
  const std::vector<int> order = Permutation(static_cast<int>(data.size()), partition_stream);
  std::vector<ClientState> clients;
  for (int c = 0; c < num_clients; ++c) {
    ClientState client{.id = c, .stream = RngStream(setup.seed, {"client", c})};
    for (std::size_t r = static_cast<std::size_t>(c); r < order.size();
         r += static_cast<std::size_t>(num_clients)) {
      const auto i = static_cast<std::size_t>(order[r]);
      client.data.ids.push_back(data.ids[i]);
      client.data.tokens.push_back(data.tokens[i]);
      client.data.labels.push_back(data.labels[i]);
    }
    if (client.data.size() == 0) {
      throw ConfigError("client " + std::to_string(c) + " received no training data");
    }
    const int share = m / num_clients + (c < m % num_clients ? 1 : 0);
    if (setup.hide.enabled && !setup.hide.fresh_masks && share > 0) {
      RngStream pool_stream = client.stream.Child({"pool"});
      client.pool = GenMaskPool(share, setup.dims.rep_dim, pool_stream,
                                "client-" + std::to_string(c));
    }
    clients.push_back(std::move(client));
  }
  return clients;
}

std::int64_t EpochOf(int round, std::size_t n, int batch_size) {
  const auto rounds_per_epoch =
      static_cast<std::int64_t>((n + static_cast<std::size_t>(batch_size) - 1) /
                                static_cast<std::size_t>(batch_size));
  return round / rounds_per_epoch;
}

ClientUpdate RunClientUpdate(ClientState& client, const Params& params, const TrainSetup& setup,
                             int round, std::span<const TokenIds> public_tokens) {
  const int b = setup.fed.batch_size;
  const std::size_t n = client.data.size();
  if (b < 1 || static_cast<std::size_t>(b) > n) {
    throw ConfigError("batch size " + std::to_string(b) + " exceeds client " +
                      std::to_string(client.id) + " dataset size " + std::to_string(n));
  }
  const RngStream round_stream = client.stream.Child({"round", round});
  RngStream batch_stream = round_stream.Child({"batch"});
  std::vector<TokenIds> sources;
  std::vector<SoftLabel> labels;
  std::vector<std::int64_t> batch_ids;
  for (int i = 0; i < b; ++i) {
    const auto row = static_cast<std::size_t>(batch_stream.UniformInt(n));
    sources.push_back(client.data.tokens[row]);
    labels.push_back(OneHot(client.data.labels[row], setup.dims.num_classes));
    batch_ids.push_back(client.data.ids[row]);
  }

  if (!setup.hide.enabled) {
    LossAndGrads lg = BackwardPlain(params, sources, labels);
    return {std::move(lg.grads), lg.loss};
  }

  std::vector<DenseVec> reps;
  reps.reserve(sources.size());
  for (const TokenIds& ids : sources) reps.push_back(Encode(params, ids));
  const std::int64_t epoch = EpochOf(round, n, b);
  const MaskAssignment masks = ChooseMasks(client, setup, round, batch_ids, epoch);
  RngStream hide_stream = round_stream.Child({"hide"});
  HideResult hidden;
  if (setup.hide.variant == HideVariant::kInter) {
    if (public_tokens.empty()) throw ConfigError("inter variant requires a public corpus");
    if (client.cache_epoch != epoch) {
      RefreshPublicCache(client, params.encoder(), setup.dims, public_tokens);
      client.cache_epoch = epoch;
    }
    hidden = HideBatchInter(reps, labels, client.public_cache, setup.hide.k, masks, hide_stream);
  } else {
    hidden = HideBatchIntra(reps, labels, setup.hide.k, masks, hide_stream);
  }
  LossAndGrads lg = BackwardBatch(params, sources, hidden.batch, hidden.key);
  return {std::move(lg.grads), lg.loss};
}

std::vector<std::uint8_t> SerializeClientUpdate(const ClientUpdate& update) {
  std::vector<std::uint8_t> out;
  AppendRaw(out, static_cast<std::uint64_t>(update.grads.values().size()));
  for (double v : update.grads.values()) AppendRaw(out, v);
  AppendRaw(out, update.loss);
  return out;
}

void ServerRound(ServerState& server, std::span<const Gradients> grads, int clients) {
  if (static_cast<int>(grads.size()) != clients) {
    throw ConfigError("server expected " + std::to_string(clients) + " gradient sets, got " +
                      std::to_string(grads.size()));
  }
  const std::size_t n = server.params.values().size();
  std::vector<double> avg(n);
  for (std::size_t c = 0; c < grads.size(); ++c) {
    if (!(grads[c].dims() == server.params.dims())) {
      throw ConfigError("gradient shape does not match the model");
    }
    const auto g = grads[c].values();
    if (c == 0) {
      std::copy(g.begin(), g.end(), avg.begin());
    } else {
      for (std::size_t i = 0; i < n; ++i) avg[i] += g[i];
    }
  }
  if (clients > 1) {
    const double inv = 1.0 / static_cast<double>(clients);
    for (double& v : avg) v *= inv;
  }
  if (server.mode == OptimizerMode::kSgd) {
    SgdStep(server.params.values(), avg, server.learning_rate);
  } else {
    AdamStep(server.params.values(), avg, server.optimizer);
  }
  ++server.round;
}

double Evaluate(const Params& params, const EncodedDataset& data) {
  return EvaluateKeyed(params, data, {});
}

double EvaluateKeyed(const Params& params, const EncodedDataset& data,
                     std::span<const DenseVec> masks) {
  if (data.size() == 0) throw ConfigError("cannot evaluate on an empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] < 0) throw ConfigError("evaluation requires labeled data");
    const DenseVec rep = Encode(params, data.tokens[i]);
    SoftLabel p;
    if (masks.empty()) {
      p = Classify(params, rep);
    } else {
      p = SoftLabel::Zero(params.dims().num_classes);
      for (const DenseVec& mask : masks) p += Classify(params, rep.cwiseProduct(mask));
    }
    Eigen::Index best = 0;
    p.maxCoeff(&best);
    if (best == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::string RoundLogJson(const RoundLog& log, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["round"] = log.round;
  j["loss"] = log.loss;
  if (log.accuracy) j["accuracy"] = *log.accuracy;
  j["grad_norms"] = log.grad_norms;
  j["config_hash"] = config_hash;
  return j.dump();
}

TrainResult RunTraining(const TrainSetup& setup, const EncodedDataset& train,
                        const EncodedDataset& eval_data, std::span<const TokenIds> public_tokens,
                        const TrainOptions& options) {
  if (setup.hide.enabled && setup.hide.variant == HideVariant::kInter && public_tokens.empty()) {
    throw ConfigError("inter variant requires a public corpus");
  }
  if (setup.fed.rounds < 0) throw ConfigError("rounds must be non-negative");
  TrainResult state{
      .server = {.params = InitParams(setup.dims, RngStream(setup.seed, {"init"})),
                 .total_rounds = setup.fed.rounds,
                 .learning_rate = setup.fed.learning_rate,
                 .mode = setup.fed.optimizer,
                 .optimizer = AdamState(AdamConfig{.learning_rate = setup.fed.learning_rate,
                                                   .weight_decay = setup.fed.weight_decay},
                                        ParamLayout(setup.dims).total)},
      .clients = MakeClients(setup, train),
  };

  if (options.resume_from) {
    Checkpoint ckpt = ReadCheckpoint(*options.resume_from);
    if (!(ckpt.params.dims() == setup.dims)) {
      throw ConfigError("checkpoint model dimensions do not match the config");
    }
    state.server.params = std::move(ckpt.params);
    state.server.round = static_cast<int>(RequireExtra(ckpt.extra, "state.round").at(0));
    if (state.server.mode == OptimizerMode::kAdam) {
      state.server.optimizer.first_moment = RequireExtra(ckpt.extra, "adam.m");
      state.server.optimizer.second_moment = RequireExtra(ckpt.extra, "adam.v");
      state.server.optimizer.step =
          static_cast<std::int64_t>(RequireExtra(ckpt.extra, "adam.step").at(0));
    }
    for (ClientState& c : state.clients) {
      const auto it = ckpt.extra.find(ClientKey(c.id, "cache_epoch"));
      if (it == ckpt.extra.end()) continue;
      RefreshPublicCache(c, RequireExtra(ckpt.extra, ClientKey(c.id, "cache_encoder")),
                         setup.dims, public_tokens);
      c.cache_epoch = static_cast<std::int64_t>(it->second.at(0));
    }
  }

  const int num_clients = setup.fed.clients;
  std::vector<ClientUpdate> updates(static_cast<std::size_t>(num_clients),
                                    ClientUpdate{Gradients(setup.dims), 0.0});
  for (int t = state.server.round; t < setup.fed.rounds; ++t) {
    ParallelFor(static_cast<std::size_t>(num_clients), options.workers, [&](std::size_t c) {
      updates[c] = RunClientUpdate(state.clients[c], state.server.params, setup, t, public_tokens);
    });
    RoundLog log{.round = t};
    std::vector<Gradients> grads;
    grads.reserve(updates.size());
    for (int c = 0; c < num_clients; ++c) {
      const ClientUpdate& u = updates[static_cast<std::size_t>(c)];
      if (!std::isfinite(u.loss) || !AllFinite(u.grads.values())) {
        throw NumericError("non-finite loss or gradient in round " + std::to_string(t) +
                           " from client " + std::to_string(c));
      }
      log.loss += u.loss;
      log.grad_norms.push_back(Norm(u.grads.values()));
      grads.push_back(u.grads);
    }
    log.loss /= static_cast<double>(num_clients);
    ServerRound(state.server, grads, num_clients);
    const int done = t + 1;
    const int every = setup.fed.eval_every;
    if (every > 0 && eval_data.size() > 0 && (done % every == 0 || done == setup.fed.rounds)) {
      log.accuracy = EvaluateTrained(setup, state, eval_data);
    }
    if (options.on_round) options.on_round(log);
    state.logs.push_back(std::move(log));
    if (options.checkpoint_dir && setup.fed.checkpoint_every > 0 &&
        done % setup.fed.checkpoint_every == 0) {
      std::filesystem::create_directories(*options.checkpoint_dir);
      WriteTrainingCheckpoint(
          *options.checkpoint_dir / ("ckpt_round_" + std::to_string(done) + ".thmc"), state,
          options.config_hash);
    }
  }
  return state;
}

std::vector<std::uint8_t> SerializeTrainingState(const TrainResult& state) {
  return SerializeCheckpoint(state.server.params, TrainingExtras(state));
}

void WriteTrainingCheckpoint(const std::filesystem::path& path, const TrainResult& state,
                             const std::string& config_hash) {
  WriteCheckpoint(path, state.server.params, TrainingExtras(state));
  std::filesystem::path sidecar = path;
  sidecar.replace_extension(".json");
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["round"] = state.server.round;
  std::ofstream out(sidecar);
  if (!out) throw ConfigError("cannot write checkpoint sidecar: " + sidecar.string());
  out << j.dump(2) << "\n";
}

}  // namespace hidesim
