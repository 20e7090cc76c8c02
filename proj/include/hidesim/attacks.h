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

#ifndef HIDESIM_ATTACKS_H_
#define HIDESIM_ATTACKS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hidesim/corpus.h"
#include "hidesim/dense.h"
#include "hidesim/model.h"
#include "hidesim/optim.h"
#include "hidesim/rng.h"
#include "hidesim/texthide.h"

namespace hidesim {

// ---------------------------------------------------------------------------
// Gradient matching.

struct AttackConfig {
  int iterations = 1200;
  AdamConfig optimizer{.learning_rate = 0.1};
  bool reveal_true_label = true;
  // The victim hides with a single fixed mask (m = 1).
  bool fixed_single_mask = true;
  double threshold = 1e-3;
  int trials = 20;
  std::uint64_t seed = 1;
  // Curve sampling period in iterations (the last iteration is always kept).
  int log_every = 10;
};

// The continuous victim: the model is fed `inputs` (pooled-embedding vectors)
// directly, mixed with weights `lambda` and masked with `mask` (empty = none).
struct GradMatchVictim {
  std::vector<DenseVec> inputs;
  std::vector<double> lambda;
  DenseVec mask;
  SoftLabel label;
};

// Gradient of the soft cross-entropy of one hidden continuous example.
Gradients VictimGradients(const Params& params, const GradMatchVictim& victim);

struct DummyState {
  DenseVec input;
  DenseVec mask;
  // Label logits (optimized only when the label is not revealed).
  DenseVec label_logits;
};

struct GradDistance {
  double value = 0.0;
  DenseVec d_input;
  DenseVec d_mask;
  DenseVec d_label_logits;
};

// ||g(x, sigma, y) - target||^2 and its exact gradient with respect to the
// dummy variables. `label` is used as-is when given, otherwise
// softmax(label_logits). An empty dummy mask means "no mask".
GradDistance GradientDistance(const Params& params, const Gradients& target,
                              const DummyState& dummy, const std::optional<SoftLabel>& label);

struct CurvePoint {
  int iteration = 0;
  double grad_distance = 0.0;
  double mask_mse = 0.0;
  double input_mse = 0.0;
};

struct AttackOutcome {
  DenseVec input;
  SoftLabel label;
  DenseVec mask;
  std::vector<CurvePoint> curve;
  double final_grad_distance = 0.0;
  double final_input_mse = 0.0;
  double final_mask_mse = 0.0;
  bool success = false;
  std::string diagnostic;
};

// Ground truth used only for logging and judging, never for optimization.
struct AttackTruth {
  DenseVec input;
  DenseVec mask;
};

// Optimizes a dummy (x, sigma, y) so that its gradient matches `target`.
// With `optimize_mask` false the dummy carries no mask. `init` overrides the
// standard-normal initialization.
AttackOutcome GradMatchAttack(const Gradients& target, const Params& params,
                              const AttackTruth& truth, const std::optional<SoftLabel>& label,
                              bool optimize_mask, const AttackConfig& cfg, RngStream& stream,
                              const std::optional<DummyState>& init = std::nullopt);

struct VictimModel {
  int input_dim = 8;
  // No hidden classifier layer: the masked representation feeds the output
  // layer directly.
  std::vector<int> hidden = {};
  int num_classes = 2;

  ModelDims Dims(int rep_dim) const {
    return ModelDims{.vocab_size = 0, .embed_dim = input_dim, .rep_dim = rep_dim,
                     .hidden = hidden, .num_classes = num_classes};
  }
};

struct GradMatchCell {
  int k = 1;
  int d = 4;
  bool masked = false;

  std::string Name() const;
};

struct TrialRecord {
  int trial = 0;
  bool success = false;
  double final_grad_distance = 0.0;
  double final_input_mse = 0.0;
  double final_mask_mse = 0.0;
  std::string diagnostic;
  std::vector<CurvePoint> curve;
};

struct CellResult {
  GradMatchCell cell;
  double success_rate = 0.0;
  double mean_final_input_mse = 0.0;
  std::vector<TrialRecord> trials;
};

// Runs one attack trial: draws a fresh victim model and example, computes its
// gradient, and attacks it.
TrialRecord RunGradMatchTrial(const GradMatchCell& cell, int trial, const VictimModel& model,
                              const AttackConfig& cfg);

// Every cell of the grid, `cfg.trials` independent trials each.
std::vector<CellResult> AttackSuccessRate(std::span<const GradMatchCell> grid,
                                          const VictimModel& model, const AttackConfig& cfg,
                                          int workers = 1);

// ---------------------------------------------------------------------------
// Representation similarity search.

struct RssIndex {
  std::vector<std::int64_t> ids;
  std::vector<DenseVec> reps;
  std::size_t size() const { return ids.size(); }
};

struct RssHit {
  std::int64_t id = 0;
  std::size_t row = 0;
  double similarity = 0.0;
};

// Encodes every sentence with the given (unencrypted) encoder.
RssIndex RssBuildIndex(std::span<const std::int64_t> ids, std::span<const TokenIds> tokens,
                       const Params& params);

// Entry of maximum cosine similarity; ties go to the lowest id. Throws
// NumericError("degenerate query") for a zero or non-finite query.
RssHit RssQuery(const RssIndex& index, const DenseVec& query);

std::vector<RssHit> RssQueryAll(const RssIndex& index, std::span<const DenseVec> queries,
                                int workers = 1);

// ---------------------------------------------------------------------------
// RepRecon.

struct ReconConfig {
  int hidden = 128;
  int epochs = 20;
  int batch_size = 32;
  AdamConfig optimizer{.learning_rate = 1e-3};
  std::uint64_t seed = 1;
};

// d -> h -> h -> d MLP with ReLU hidden layers and linear output.
class ReconNet {
 public:
  ReconNet(int dim, int hidden, RngStream& stream);

  DenseVec Forward(const DenseVec& x) const;
  // Mean squared error over the pairs and its gradient in `grads` (same
  // layout as params()).
  double LossAndGrad(std::span<const DenseVec> inputs, std::span<const DenseVec> targets,
                     std::vector<double>& grads) const;

  int dim() const { return dim_; }
  int hidden() const { return hidden_; }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

 private:
  int dim_;
  int hidden_;
  std::vector<double> params_;
};

struct ReconResult {
  ReconNet net;
  std::vector<double> epoch_losses;
  double final_loss = 0.0;
};

// Trains on (hidden, raw) pairs; inputs are hidden reps, targets raw reps.
ReconResult ReconTrain(std::span<const DenseVec> hidden, std::span<const DenseVec> raw,
                       const ReconConfig& cfg);

RssHit ReconAttack(const ReconNet& net, const DenseVec& hidden_query, const RssIndex& index);

// ---------------------------------------------------------------------------
// Subset sum.

struct SubsetSumResult {
  std::optional<std::vector<int>> indices;
  std::uint64_t candidates = 0;
};

// Enumerates k-subsets of the rows in lexicographic order and returns the
// first whose sum matches `target` within `tolerance` (max abs difference).
// A full scan keeps counting after the match and reports C(N, k).
SubsetSumResult SubsetSumRecover(std::span<const DenseVec> vectors, const DenseVec& target, int k,
                                 bool early_exit = false, double tolerance = 1e-9);

std::uint64_t Binomial(int n, int k);

}  // namespace hidesim

#endif  // HIDESIM_ATTACKS_H_
