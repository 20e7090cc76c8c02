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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include "gtest/gtest.h"
#include "hidesim/errors.h"
#include "hidesim/fedsim.h"

namespace hidesim {
namespace {

namespace fs = std::filesystem;

struct Task {
  Vocab vocab;
  EncodedDataset train;
  EncodedDataset test;
  std::vector<TokenIds> public_tokens;
};

Task MakeTask(int per_class = 100) {
  Task task;
  const Dataset train = GenSynthetic({.per_class = per_class, .seed = 5});
  const Dataset test = GenSynthetic({.per_class = per_class / 2, .seed = 5, .split = "test"});
  const Dataset pub = GenSynthetic({.per_class = 20, .seed = 5, .split = "public"});
  task.vocab = Vocab::Build(train, /*reserve_unknown=*/true);
  task.train = EncodeDataset(train, task.vocab);
  task.test = EncodeDataset(test, task.vocab);
  task.public_tokens = EncodeDataset(pub, task.vocab).tokens;
  return task;
}

TrainSetup SmallSetup(const Task& task) {
  TrainSetup setup;
  setup.seed = 3;
  setup.dims = ModelDims{.vocab_size = task.vocab.size(), .embed_dim = 8, .rep_dim = 12,
                         .hidden = {16}, .num_classes = 2};
  setup.fed.batch_size = 8;
  setup.fed.rounds = 20;
  setup.fed.eval_every = 0;
  return setup;
}

TEST(MakeClientsTest, PartitionsDataAndMasks) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.clients = 3;
  setup.hide.m = 16;
  const auto clients = MakeClients(setup, task.train);
  ASSERT_EQ(clients.size(), 3u);
  std::size_t rows = 0;
  int masks = 0;
  for (const auto& c : clients) {
    rows += c.data.size();
    masks += c.pool.size();
  }
  EXPECT_EQ(rows, task.train.size());
  EXPECT_EQ(masks, 16);
  EXPECT_EQ(clients[0].pool.size(), 6);
  EXPECT_EQ(clients[2].pool.size(), 5);
  // Pools are generated from disjoint client streams.
  EXPECT_NE(clients[0].pool.masks[0].signs, clients[1].pool.masks[0].signs);
}

TEST(MakeClientsTest, ClientsSeeEveryClassOnClassOrderedData) {
  const Task task = MakeTask();
  // The synthetic split alternates labels, so an unshuffled deal with an even
  // client count would give single-class clients.
  ASSERT_NE(task.train.labels[0], task.train.labels[1]);
  TrainSetup setup = SmallSetup(task);
  setup.fed.clients = 4;
  const auto clients = MakeClients(setup, task.train);
  std::vector<std::int64_t> ids;
  for (const auto& c : clients) {
    const auto ones = std::count(c.data.labels.begin(), c.data.labels.end(), 1);
    EXPECT_GT(ones, 0);
    EXPECT_LT(ones, static_cast<std::ptrdiff_t>(c.data.size()));
    ids.insert(ids.end(), c.data.ids.begin(), c.data.ids.end());
  }
  std::sort(ids.begin(), ids.end());
  std::vector<std::int64_t> expected = task.train.ids;
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(ids, expected);
  const auto again = MakeClients(setup, task.train);
  EXPECT_EQ(again[2].data.ids, clients[2].data.ids);
}

TEST(MakeClientsTest, RejectsPoolSmallerThanClientCount) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.clients = 4;
  setup.hide.m = 3;
  EXPECT_THROW(MakeClients(setup, task.train), ConfigError);
  setup.hide.m = 0;
  EXPECT_NO_THROW(MakeClients(setup, task.train));
}

TEST(EpochOfTest, CeilOfBatches) {
  EXPECT_EQ(EpochOf(0, 10, 3), 0);
  EXPECT_EQ(EpochOf(3, 10, 3), 0);
  EXPECT_EQ(EpochOf(4, 10, 3), 1);
  EXPECT_EQ(EpochOf(9, 9, 3), 3);
}

TEST(ClientUpdateTest, ShapeCongruentGradients) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.hide.m = 4;
  setup.hide.k = 2;
  auto clients = MakeClients(setup, task.train);
  const Params params = InitParams(setup.dims, RngStream(1, {"init"}));
  const ClientUpdate u = RunClientUpdate(clients[0], params, setup, 0, {});
  EXPECT_TRUE(u.grads.dims() == params.dims());
  EXPECT_EQ(u.grads.values().size(), params.values().size());
  EXPECT_TRUE(std::isfinite(u.loss));
}

TEST(ClientUpdateTest, BaselineSchemeEqualsPlainBitwise) {
  const Task task = MakeTask();
  TrainSetup hidden = SmallSetup(task);
  hidden.hide.m = 0;
  hidden.hide.k = 1;
  TrainSetup plain = hidden;
  plain.hide.enabled = false;
  auto a = MakeClients(hidden, task.train);
  auto b = MakeClients(plain, task.train);
  const Params params = InitParams(hidden.dims, RngStream(1, {"init"}));
  for (int t = 0; t < 5; ++t) {
    const ClientUpdate x = RunClientUpdate(a[0], params, hidden, t, {});
    const ClientUpdate y = RunClientUpdate(b[0], params, plain, t, {});
    EXPECT_EQ(x.loss, y.loss);
    EXPECT_TRUE(x.grads == y.grads) << "round " << t;
  }
}

TEST(ClientUpdateTest, IdenticalClientsGiveIdenticalGradients) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.hide.m = 8;
  setup.hide.k = 3;
  auto a = MakeClients(setup, task.train);
  auto b = MakeClients(setup, task.train);
  const Params params = InitParams(setup.dims, RngStream(2, {"init"}));
  EXPECT_TRUE(RunClientUpdate(a[0], params, setup, 7, {}).grads ==
              RunClientUpdate(b[0], params, setup, 7, {}).grads);
}

TEST(ClientUpdateTest, BatchLargerThanDataThrows) {
  const Task task = MakeTask(5);
  TrainSetup setup = SmallSetup(task);
  setup.fed.batch_size = 11;
  auto clients = MakeClients(setup, task.train);
  const Params params = InitParams(setup.dims, RngStream(1, {"init"}));
  EXPECT_THROW(RunClientUpdate(clients[0], params, setup, 0, {}), ConfigError);
}

bool ContainsDouble(const std::vector<std::uint8_t>& bytes, double value) {
  std::uint8_t pattern[sizeof(double)];
  std::memcpy(pattern, &value, sizeof(double));
  return std::search(bytes.begin(), bytes.end(), std::begin(pattern), std::end(pattern)) !=
         bytes.end();
}

TEST(ClientUpdateTest, TrafficCarriesNoKeyMaterial) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.hide.m = 4;
  setup.hide.k = 3;
  setup.hide.schedule = MaskSchedule::kPerBatch;
  auto clients = MakeClients(setup, task.train);
  const Params params = InitParams(setup.dims, RngStream(1, {"init"}));
  constexpr int kRound = 2;
  const auto bytes = SerializeClientUpdate(RunClientUpdate(clients[0], params, setup, kRound, {}));
  // Only the gradient vector and the loss travel.
  EXPECT_EQ(bytes.size(), sizeof(std::uint64_t) + (params.values().size() + 1) * sizeof(double));
  // Replay the client's private draws and look for them on the wire.
  const RngStream round = RngStream(setup.seed, {"client", 0}).Child({"round", kRound});
  RngStream lambda_stream = round.Child({"hide"}).Child({"lambda"});
  const DenseMat lambda = SampleLambda(setup.fed.batch_size, setup.hide.k, lambda_stream);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    EXPECT_FALSE(ContainsDouble(bytes, lambda.data()[i]));
  }
  RngStream batch_stream = round.Child({"batch"});
  for (int i = 0; i < setup.fed.batch_size; ++i) {
    const auto row = batch_stream.UniformInt(clients[0].data.size());
    const DenseVec rep = Encode(params, clients[0].data.tokens[row]);
    for (Eigen::Index j = 0; j < rep.size(); ++j) EXPECT_FALSE(ContainsDouble(bytes, rep[j]));
  }
}

TEST(ServerRoundTest, SingleClientSgdIsPlainStep) {
  const ModelDims dims{.vocab_size = 4, .embed_dim = 2, .rep_dim = 3, .hidden = {3},
                       .num_classes = 2};
  ServerState server{.params = InitParams(dims, RngStream(1, {"init"})), .learning_rate = 0.5,
                     .mode = OptimizerMode::kSgd};
  const Params before = server.params;
  Gradients g = InitParams(dims, RngStream(2, {"grad"}));
  ServerRound(server, std::vector<Gradients>{g}, 1);
  for (std::size_t i = 0; i < before.values().size(); ++i) {
    EXPECT_EQ(server.params.values()[i], before.values()[i] - 0.5 * g.values()[i]);
  }
  EXPECT_EQ(server.round, 1);
}

TEST(ServerRoundTest, AveragingIsLinear) {
  const ModelDims dims{.vocab_size = 4, .embed_dim = 2, .rep_dim = 3, .hidden = {3},
                       .num_classes = 2};
  const Params init = InitParams(dims, RngStream(1, {"init"}));
  std::vector<Gradients> grads;
  for (int c = 0; c < 3; ++c) grads.push_back(InitParams(dims, RngStream(3, {"grad", c})));
  Gradients mean(dims);
  for (std::size_t i = 0; i < mean.values().size(); ++i) {
    mean.values()[i] = (grads[0].values()[i] + grads[1].values()[i] + grads[2].values()[i]) / 3.0;
  }
  for (OptimizerMode mode : {OptimizerMode::kSgd, OptimizerMode::kAdam}) {
    ServerState a{.params = init, .learning_rate = 0.1, .mode = mode,
                  .optimizer = AdamState(AdamConfig{.learning_rate = 0.1}, init.values().size())};
    ServerState b = a;
    ServerRound(a, grads, 3);
    ServerRound(b, std::vector<Gradients>{mean}, 1);
    for (std::size_t i = 0; i < init.values().size(); ++i) {
      EXPECT_NEAR(a.params.values()[i], b.params.values()[i], 1e-14);
    }
  }
  // Identical gradient sets reduce to the single-client update.
  ServerState x{.params = init, .learning_rate = 0.1, .mode = OptimizerMode::kSgd};
  ServerState y = x;
  ServerRound(x, std::vector<Gradients>{grads[0], grads[0], grads[0], grads[0]}, 4);
  ServerRound(y, std::vector<Gradients>{grads[0]}, 1);
  EXPECT_TRUE(x.params == y.params);
}

TEST(ServerRoundTest, ZeroGradientsLeaveSgdParamsUnchanged) {
  const ModelDims dims{.vocab_size = 4, .embed_dim = 2, .rep_dim = 3, .hidden = {3},
                       .num_classes = 2};
  ServerState server{.params = InitParams(dims, RngStream(1, {"init"})), .learning_rate = 0.3,
                     .mode = OptimizerMode::kSgd};
  const Params before = server.params;
  ServerRound(server, std::vector<Gradients>{Gradients(dims), Gradients(dims)}, 2);
  EXPECT_TRUE(server.params == before);
}

TEST(ServerRoundTest, WrongClientCountThrows) {
  const ModelDims dims{.vocab_size = 4, .embed_dim = 2, .rep_dim = 3, .hidden = {3},
                       .num_classes = 2};
  ServerState server{.params = Params(dims), .learning_rate = 0.1, .mode = OptimizerMode::kSgd};
  EXPECT_THROW(ServerRound(server, std::vector<Gradients>{Gradients(dims)}, 2), ConfigError);
}

TEST(EvaluateTest, RandomParamsNearChance) {
  const Task task = MakeTask(500);
  TrainSetup setup = SmallSetup(task);
  double total = 0.0;
  constexpr int kModels = 20;
  for (int s = 0; s < kModels; ++s) {
    total += Evaluate(InitParams(setup.dims, RngStream(100 + s, {"init"})), task.train);
  }
  EXPECT_NEAR(total / kModels, 0.5, 0.05);
}

TEST(EvaluateTest, SelfLabeledFixtureIsPerfectAndOrderInvariant) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  const Params params = InitParams(setup.dims, RngStream(9, {"init"}));
  EncodedDataset fixture = task.test;
  for (std::size_t i = 0; i < fixture.size(); ++i) {
    const SoftLabel p = Classify(params, Encode(params, fixture.tokens[i]));
    Eigen::Index best = 0;
    p.maxCoeff(&best);
    fixture.labels[i] = static_cast<int>(best);
  }
  EXPECT_EQ(Evaluate(params, fixture), 1.0);
  const double acc = Evaluate(params, task.test);
  EncodedDataset reversed = task.test;
  std::reverse(reversed.tokens.begin(), reversed.tokens.end());
  std::reverse(reversed.labels.begin(), reversed.labels.end());
  EXPECT_EQ(Evaluate(params, reversed), acc);
  EXPECT_THROW(Evaluate(params, EncodedDataset{}), ConfigError);
}

TEST(EvaluateTest, KeyedWithoutMasksIsPlain) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  const Params params = InitParams(setup.dims, RngStream(9, {"init"}));
  EXPECT_EQ(EvaluateKeyed(params, task.test, {}), Evaluate(params, task.test));
}

TEST(RunTrainingTest, ZeroRoundsReturnsInitialParams) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.rounds = 0;
  const TrainResult r = RunTraining(setup, task.train, task.test, {}, {});
  EXPECT_TRUE(r.server.params == InitParams(setup.dims, RngStream(setup.seed, {"init"})));
  EXPECT_TRUE(r.logs.empty());
}

double MeanLoss(const std::vector<RoundLog>& logs, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += logs[i].loss;
  return acc / static_cast<double>(end - begin);
}

TEST(RunTrainingTest, LossDecreases) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.rounds = 200;
  setup.hide.m = 8;
  setup.hide.k = 2;
  const TrainResult r = RunTraining(setup, task.train, task.test, {}, {});
  ASSERT_EQ(r.logs.size(), 200u);
  EXPECT_LT(MeanLoss(r.logs, 180, 200), MeanLoss(r.logs, 0, 20));
}

TEST(RunTrainingTest, DeterministicAcrossWorkerCounts) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.clients = 4;
  setup.hide.m = 8;
  setup.hide.k = 4;
  setup.hide.variant = HideVariant::kInter;
  const TrainResult one = RunTraining(setup, task.train, task.test, task.public_tokens,
                                      {.workers = 1});
  const TrainResult eight = RunTraining(setup, task.train, task.test, task.public_tokens,
                                        {.workers = 8});
  EXPECT_EQ(SerializeTrainingState(one), SerializeTrainingState(eight));
}

TEST(RunTrainingTest, ResumeReproducesFinalBytes) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.clients = 2;
  setup.fed.rounds = 40;
  setup.fed.checkpoint_every = 15;
  setup.hide.m = 6;
  setup.hide.k = 3;
  setup.hide.variant = HideVariant::kInter;
  const fs::path dir = fs::temp_directory_path() / "hidesim_fedsim_resume";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const TrainResult full = RunTraining(setup, task.train, task.test, task.public_tokens,
                                       {.config_hash = "abc", .checkpoint_dir = dir});
  ASSERT_TRUE(fs::exists(dir / "ckpt_round_30.thmc"));
  ASSERT_TRUE(fs::exists(dir / "ckpt_round_30.json"));
  const TrainResult resumed =
      RunTraining(setup, task.train, task.test, task.public_tokens,
                  {.resume_from = dir / "ckpt_round_30.thmc"});
  EXPECT_EQ(resumed.logs.size(), 10u);
  EXPECT_EQ(SerializeTrainingState(full), SerializeTrainingState(resumed));
}

TEST(RunTrainingTest, InterWithoutPublicCorpusThrows) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.hide.variant = HideVariant::kInter;
  setup.hide.k = 2;
  EXPECT_THROW(RunTraining(setup, task.train, task.test, {}, {}), ConfigError);
}

TEST(RunTrainingTest, NonFiniteLossNamesRoundAndClient) {
  const Task task = MakeTask();
  TrainSetup setup = SmallSetup(task);
  setup.fed.optimizer = OptimizerMode::kSgd;
  setup.fed.learning_rate = 1e300;
  setup.fed.rounds = 50;
  try {
    RunTraining(setup, task.train, task.test, {}, {});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("round"), std::string::npos);
    EXPECT_NE(what.find("client 0"), std::string::npos);
  }
}

TEST(RoundLogTest, JsonLine) {
  const RoundLog log{.round = 3, .loss = 0.5, .accuracy = 0.75, .grad_norms = {1.0, 2.0}};
  EXPECT_EQ(RoundLogJson(log, "h"),
            R"({"round":3,"loss":0.5,"accuracy":0.75,"grad_norms":[1.0,2.0],"config_hash":"h"})");
}

TEST(SchemeTagTest, Names) {
  EXPECT_EQ(TextHideParams{}.SchemeTag(), "baseline");
  EXPECT_EQ((TextHideParams{.m = 16, .k = 2}).SchemeTag(), "TextHide_intra");
  EXPECT_EQ((TextHideParams{.m = 16, .k = 2, .variant = HideVariant::kInter}).SchemeTag(),
            "TextHide_inter");
}

}  // namespace
}  // namespace hidesim
