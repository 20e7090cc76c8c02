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
#include <vector>

#include "gtest/gtest.h"
#include "hidesim/attacks.h"
#include "hidesim/dual.h"
#include "hidesim/errors.h"
#include "hidesim/grad_check.h"

namespace hidesim {
namespace {

DenseVec Normal(int n, RngStream& s) {
  DenseVec v(n);
  for (int i = 0; i < n; ++i) v[i] = s.Normal();
  return v;
}

TEST(DualTest, ChainRule) {
  const Dual x(0.3, 1.0);
  const Dual y = tanh(x * x) / exp(x) + log(x + 2.0) - x;
  const double v = 0.3;
  const double expected = (2 * v * (1 - std::pow(std::tanh(v * v), 2)) - std::tanh(v * v)) /
                              std::exp(v) +
                          1.0 / (v + 2.0) - 1.0;
  EXPECT_NEAR(y.t, expected, 1e-14);
  EXPECT_NEAR(y.v, std::tanh(v * v) / std::exp(v) + std::log(v + 2.0) - v, 1e-15);
}

struct Setting {
  int d;
  std::vector<int> hidden;
  bool masked;
  bool reveal;
};

class GradientDistanceTest : public ::testing::TestWithParam<Setting> {};

TEST_P(GradientDistanceTest, MatchesFiniteDifferences) {
  const Setting s = GetParam();
  const ModelDims dims{.vocab_size = 0, .embed_dim = 5, .rep_dim = s.d, .hidden = s.hidden,
                       .num_classes = 3};
  RngStream stream(21, {"gd", s.d, s.masked ? 1 : 0, s.reveal ? 1 : 0});
  const Params params = InitParams(dims, stream.Child({"model"}));
  GradMatchVictim victim{.inputs = {Normal(5, stream), Normal(5, stream)},
                         .lambda = {0.7, 0.3},
                         .label = (SoftLabel(3) << 0.7, 0.0, 0.3).finished()};
  if (s.masked) victim.mask = GenMaskPool(1, s.d, stream).masks[0].signs;
  const Gradients target = VictimGradients(params, victim);

  DummyState dummy{.input = Normal(5, stream)};
  if (s.masked) dummy.mask = Normal(s.d, stream);
  if (!s.reveal) dummy.label_logits = Normal(3, stream);
  const std::optional<SoftLabel> label =
      s.reveal ? std::optional<SoftLabel>(victim.label) : std::nullopt;
  const GradDistance gd = GradientDistance(params, target, dummy, label);

  // Flatten (x, sigma, logits) for the checker.
  std::vector<double> flat;
  std::vector<double> analytic;
  auto append = [](std::vector<double>& out, const DenseVec& v) {
    out.insert(out.end(), v.data(), v.data() + v.size());
  };
  append(flat, dummy.input);
  append(flat, dummy.mask);
  append(flat, dummy.label_logits);
  append(analytic, gd.d_input);
  append(analytic, gd.d_mask);
  append(analytic, gd.d_label_logits);
  ASSERT_EQ(flat.size(), analytic.size());
  const auto fn = [&](std::span<const double> v) {
    DummyState z = dummy;
    std::size_t o = 0;
    for (Eigen::Index i = 0; i < z.input.size(); ++i) z.input[i] = v[o++];
    for (Eigen::Index i = 0; i < z.mask.size(); ++i) z.mask[i] = v[o++];
    for (Eigen::Index i = 0; i < z.label_logits.size(); ++i) z.label_logits[i] = v[o++];
    return GradientDistance(params, target, z, label).value;
  };
  const auto check = GradCheck(fn, flat, analytic, 1e-5);
  EXPECT_LE(check.max_rel_error, 1e-3) << "worst coordinate " << check.worst_index;
}

INSTANTIATE_TEST_SUITE_P(Settings, GradientDistanceTest,
                         ::testing::Values(Setting{4, {}, false, true}, Setting{8, {}, true, true},
                                           Setting{16, {}, true, false},
                                           Setting{6, {7}, true, false},
                                           Setting{12, {5, 4}, false, false}));

TEST(VictimGradientsTest, MatchesFiniteDifferences) {
  const ModelDims dims{.vocab_size = 0, .embed_dim = 4, .rep_dim = 6, .hidden = {5},
                       .num_classes = 2};
  RngStream stream(22, {"victim"});
  const Params params = InitParams(dims, stream.Child({"model"}));
  const GradMatchVictim victim{.inputs = {Normal(4, stream), Normal(4, stream)},
                               .lambda = {0.4, 0.6},
                               .mask = GenMaskPool(1, 6, stream).masks[0].signs,
                               .label = (SoftLabel(2) << 0.4, 0.6).finished()};
  const Gradients g = VictimGradients(params, victim);
  const auto fn = [&](std::span<const double> theta) {
    Params p(dims);
    std::copy(theta.begin(), theta.end(), p.values().begin());
    DenseVec mixed = 0.4 * EncodePooled(p, victim.inputs[0]) +
                     0.6 * EncodePooled(p, victim.inputs[1]);
    return SoftCeLoss(Classify(p, mixed.cwiseProduct(victim.mask)), victim.label);
  };
  const std::vector<double> theta(params.values().begin(), params.values().end());
  EXPECT_LE(GradCheck(fn, theta, g.values(), 1e-6).max_rel_error, 1e-4);
}

TEST(GradMatchAttackTest, TrueTripleIsAFixedPoint) {
  const VictimModel model;
  const ModelDims dims = model.Dims(8);
  RngStream stream(23, {"fixed"});
  const Params params = InitParams(dims, stream.Child({"model"}));
  const DenseVec x = Normal(model.input_dim, stream);
  const DenseVec sigma = GenMaskPool(1, 8, stream).masks[0].signs;
  const SoftLabel y = OneHot(1, 2);
  const Gradients target = VictimGradients(params, {.inputs = {x}, .lambda = {1.0}, .mask = sigma,
                                                    .label = y});
  AttackConfig cfg;
  cfg.iterations = 50;
  RngStream dummy_stream(24, {"dummy"});
  const AttackOutcome out = GradMatchAttack(target, params, {x, sigma}, y, true, cfg,
                                            dummy_stream, DummyState{.input = x, .mask = sigma});
  EXPECT_EQ(out.curve.front().grad_distance, 0.0);
  EXPECT_TRUE(out.success);
  EXPECT_EQ(out.input, x);
  EXPECT_EQ(out.mask, sigma);
  EXPECT_EQ(out.final_mask_mse, 0.0);
}

TEST(GradMatchAttackTest, UndefendedAttackReducesDistance) {
  AttackConfig cfg;
  cfg.iterations = 300;
  const TrialRecord r = RunGradMatchTrial({.k = 1, .d = 4, .masked = false}, 0, VictimModel{}, cfg);
  ASSERT_GE(r.curve.size(), 2u);
  EXPECT_LT(r.curve.back().grad_distance, r.curve.front().grad_distance);
  EXPECT_EQ(r.curve.back().iteration, 300);
  EXPECT_EQ(r.curve[1].iteration, cfg.log_every);
  EXPECT_EQ(r.success, r.final_input_mse <= cfg.threshold);
}

TEST(GradMatchAttackTest, RejectsBadConfig) {
  const ModelDims dims = VictimModel{}.Dims(4);
  const Params params = InitParams(dims, RngStream(1, {"m"}));
  RngStream s(2, {"d"});
  AttackConfig cfg;
  cfg.iterations = 0;
  EXPECT_THROW(GradMatchAttack(Gradients(dims), params, {}, OneHot(0, 2), false, cfg, s),
               ConfigError);
  cfg.iterations = 1;
  cfg.threshold = 0.0;
  EXPECT_THROW(GradMatchAttack(Gradients(dims), params, {}, OneHot(0, 2), false, cfg, s),
               ConfigError);
}

TEST(AttackSuccessRateTest, DeterministicAcrossWorkers) {
  AttackConfig cfg;
  cfg.iterations = 40;
  cfg.trials = 3;
  const std::vector<GradMatchCell> grid = {{1, 4, false}, {2, 4, true}};
  const auto a = AttackSuccessRate(grid, VictimModel{}, cfg, 1);
  const auto b = AttackSuccessRate(grid, VictimModel{}, cfg, 4);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t c = 0; c < a.size(); ++c) {
    EXPECT_EQ(a[c].success_rate, b[c].success_rate);
    ASSERT_EQ(a[c].trials.size(), 3u);
    for (std::size_t t = 0; t < 3; ++t) {
      EXPECT_EQ(a[c].trials[t].final_input_mse, b[c].trials[t].final_input_mse);
    }
  }
  EXPECT_EQ(grid[1].Name(), "k2_d4_mask");
}

RssIndex TinyIndex() {
  RssIndex index;
  index.ids = {10, 4, 7};
  index.reps = {(DenseVec(2) << 1.0, 0.0).finished(), (DenseVec(2) << 0.0, 1.0).finished(),
                (DenseVec(2) << 1.0, 1.0).finished()};
  return index;
}

TEST(RssQueryTest, SelfAndOpposite) {
  const RssIndex index = TinyIndex();
  for (std::size_t i = 0; i < index.size(); ++i) {
    EXPECT_EQ(RssQuery(index, index.reps[i]).id, index.ids[i]);
  }
  RssIndex two;
  two.ids = {0, 1};
  two.reps = {(DenseVec(2) << 1.0, 0.2).finished(), (DenseVec(2) << -0.5, 1.0).finished()};
  EXPECT_EQ(RssQuery(two, -two.reps[0]).id, 1);
}

TEST(RssQueryTest, TiesGoToLowestId) {
  RssIndex index;
  index.ids = {9, 3, 5};
  index.reps = {(DenseVec(2) << 2.0, 0.0).finished(), (DenseVec(2) << 1.0, 0.0).finished(),
                (DenseVec(2) << 3.0, 0.0).finished()};
  const RssHit hit = RssQuery(index, (DenseVec(2) << 1.0, 0.0).finished());
  EXPECT_EQ(hit.id, 3);
  EXPECT_EQ(hit.row, 1u);
}

TEST(RssQueryTest, DegenerateQuery) {
  try {
    RssQuery(TinyIndex(), DenseVec::Zero(2));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_STREQ(e.what(), "degenerate query");
  }
}

TEST(RssQueryTest, ScaleInvariant) {
  RngStream s(25, {"rss"});
  RssIndex index;
  for (int i = 0; i < 50; ++i) {
    index.ids.push_back(i);
    index.reps.push_back(Normal(6, s));
  }
  for (int q = 0; q < 50; ++q) {
    const DenseVec query = Normal(6, s);
    EXPECT_EQ(RssQuery(index, query).id, RssQuery(index, 37.5 * query).id);
  }
}

TEST(RssBuildIndexTest, EncodesEverySentence) {
  const ModelDims dims{.vocab_size = 6, .embed_dim = 3, .rep_dim = 4, .hidden = {}, .num_classes = 2};
  const Params params = InitParams(dims, RngStream(26, {"m"}));
  const std::vector<std::int64_t> ids = {3, 8};
  const std::vector<TokenIds> tokens = {{1, 2}, {4}};
  const RssIndex a = RssBuildIndex(ids, tokens, params);
  const RssIndex b = RssBuildIndex(ids, tokens, params);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a.ids, ids);
  EXPECT_EQ(a.reps, b.reps);
  EXPECT_EQ(a.reps[1], Encode(params, tokens[1]));
  EXPECT_THROW(RssBuildIndex({}, {}, params), ConfigError);
}

TEST(ReconNetTest, GradientMatchesFiniteDifferences) {
  RngStream s(27, {"recon"});
  ReconNet net(5, 7, s);
  std::vector<DenseVec> x;
  std::vector<DenseVec> y;
  for (int i = 0; i < 4; ++i) {
    x.push_back(Normal(5, s));
    y.push_back(Normal(5, s));
  }
  std::vector<double> grads;
  net.LossAndGrad(x, y, grads);
  const std::vector<double> theta(net.params().begin(), net.params().end());
  const auto fn = [&](std::span<const double> p) {
    ReconNet copy = net;
    std::copy(p.begin(), p.end(), copy.params().begin());
    std::vector<double> unused;
    return copy.LossAndGrad(x, y, unused);
  };
  EXPECT_LE(GradCheck(fn, theta, grads, 1e-6).max_rel_error, 1e-4);
  // Forward agrees with the batched loss.
  double mse = 0.0;
  for (int i = 0; i < 4; ++i) mse += Mse(net.Forward(x[i]), y[i]);
  std::vector<double> unused;
  EXPECT_NEAR(net.LossAndGrad(x, y, unused), mse / 4.0, 1e-12);
}

TEST(ReconTrainTest, LossDecreases) {
  RngStream s(28, {"pairs"});
  std::vector<DenseVec> x;
  for (int i = 0; i < 200; ++i) x.push_back(Normal(6, s));
  const ReconResult r = ReconTrain(x, x, {.hidden = 32, .epochs = 10});
  ASSERT_EQ(r.epoch_losses.size(), 10u);
  EXPECT_LT(r.epoch_losses.back(), r.epoch_losses.front());
  EXPECT_LT(r.final_loss, r.epoch_losses.front());
  EXPECT_THROW(ReconTrain({}, {}, ReconConfig{}), ConfigError);
}

TEST(SubsetSumTest, RecoversPlantedPair) {
  RngStream s(29, {"subset"});
  std::vector<DenseVec> vecs;
  for (int i = 0; i < 10; ++i) vecs.push_back(Normal(4, s));
  const DenseVec target = vecs[3] + vecs[7];
  const SubsetSumResult full = SubsetSumRecover(vecs, target, 2);
  ASSERT_TRUE(full.indices.has_value());
  EXPECT_EQ(*full.indices, (std::vector<int>{3, 7}));
  EXPECT_EQ(full.candidates, Binomial(10, 2));
  const SubsetSumResult early = SubsetSumRecover(vecs, target, 2, /*early_exit=*/true);
  // Lexicographic order reaches {3, 7} after 9 + 8 + 7 pairs and four more.
  EXPECT_EQ(early.candidates, 28u);
}

TEST(SubsetSumTest, NoSolution) {
  RngStream s(30, {"subset"});
  std::vector<DenseVec> vecs;
  for (int i = 0; i < 8; ++i) vecs.push_back(Normal(3, s));
  const SubsetSumResult r = SubsetSumRecover(vecs, DenseVec::Constant(3, 100.0), 3);
  EXPECT_FALSE(r.indices.has_value());
  EXPECT_EQ(r.candidates, Binomial(8, 3));
  EXPECT_THROW(SubsetSumRecover(vecs, DenseVec::Zero(3), 9), ConfigError);
}

TEST(BinomialTest, Values) {
  EXPECT_EQ(Binomial(10, 2), 45u);
  EXPECT_EQ(Binomial(64, 3), 41664u);
  EXPECT_EQ(Binomial(16, 3), 560u);
  EXPECT_EQ(Binomial(5, 0), 1u);
  EXPECT_EQ(Binomial(5, 6), 0u);
}

}  // namespace
}  // namespace hidesim
