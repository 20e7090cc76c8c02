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

#include "hidesim/attacks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hidesim/dual.h"
#include "hidesim/errors.h"
#include "hidesim/model_math.h"
#include "hidesim/parallel.h"

namespace hidesim {
namespace {

template <typename T>
std::vector<T> Lift(const DenseVec& v) {
  std::vector<T> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = T(v[i]);
  return out;
}

template <typename T>
struct HiddenGrads {
  std::vector<std::vector<T>> d_inputs;
  std::vector<T> d_mask;
  std::vector<T> d_label;
};

// Loss of one hidden continuous example sigma o sum_j lambda_j tanh(W x_j + b)
// against `label`; accumulates parameter gradients into grad_theta and fills
// the input-side gradients.
template <typename T>
T HiddenExampleBackward(const ParamLayout& layout, const T* theta,
                        const std::vector<std::vector<T>>& inputs, std::span<const double> lambda,
                        const std::vector<T>& mask, const std::vector<T>& label, T* grad_theta,
                        HiddenGrads<T>& out) {
  const std::size_t d = static_cast<std::size_t>(layout.rep_dim);
  std::vector<std::vector<T>> reps(inputs.size());
  std::vector<T> mixed;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    math::ProjectionForward<T>(layout, theta, inputs[j], reps[j]);
    if (j == 0) {
      mixed.resize(d);
      for (std::size_t i = 0; i < d; ++i) mixed[i] = T(lambda[j]) * reps[j][i];
    } else {
      for (std::size_t i = 0; i < d; ++i) mixed[i] += T(lambda[j]) * reps[j][i];
    }
  }
  std::vector<T> hidden = mixed;
  if (!mask.empty()) {
    for (std::size_t i = 0; i < d; ++i) hidden[i] = mask[i] * mixed[i];
  }
  math::ClassifierTrace<T> trace;
  math::ClassifierForward<T>(layout, theta, hidden, trace);
  const T loss = math::SoftCrossEntropy<T>(trace.probs, label);
  const std::vector<T> d_logits = math::SoftCrossEntropyLogitGrad<T>(trace.probs, label, 1.0);
  std::vector<T> d_hidden;
  math::ClassifierBackward<T>(layout, theta, trace, d_logits, grad_theta, d_hidden);
  out.d_label = math::SoftCrossEntropyTargetGrad<T>(trace.probs, 1.0);
  std::vector<T> d_mixed = d_hidden;
  out.d_mask.clear();
  if (!mask.empty()) {
    out.d_mask.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      out.d_mask[i] = d_hidden[i] * mixed[i];
      d_mixed[i] = d_hidden[i] * mask[i];
    }
  }
  out.d_inputs.resize(inputs.size());
  std::vector<T> d_rep(d);
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (std::size_t i = 0; i < d; ++i) d_rep[i] = T(lambda[j]) * d_mixed[i];
    math::ProjectionBackward<T>(layout, theta, inputs[j], reps[j], d_rep, grad_theta,
                                out.d_inputs[j]);
  }
  return loss;
}

DenseVec Softmax(const DenseVec& logits) {
  const DenseVec e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

DenseVec Tangent(const std::vector<Dual>& v, double scale) {
  DenseVec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = scale * v[i].t;
  return out;
}

DenseVec StandardNormal(int n, RngStream& stream) {
  DenseVec v(n);
  for (int i = 0; i < n; ++i) v[i] = stream.Normal();
  return v;
}

void CheckVictim(const Params& params, const DenseVec& input) {
  if (input.size() != params.dims().embed_dim) {
    throw ConfigError("attack input dimension does not match the model");
  }
}

}  // namespace

Gradients VictimGradients(const Params& params, const GradMatchVictim& victim) {
  if (victim.inputs.empty() || victim.inputs.size() != victim.lambda.size()) {
    throw ConfigError("victim needs one mixing weight per input");
  }
  for (const DenseVec& x : victim.inputs) CheckVictim(params, x);
  const ParamLayout& layout = params.layout();
  std::vector<std::vector<double>> inputs;
  for (const DenseVec& x : victim.inputs) inputs.push_back(Lift<double>(x));
  Gradients grads(params.dims());
  HiddenGrads<double> side;
  HiddenExampleBackward<double>(layout, params.values().data(), inputs, victim.lambda,
                                Lift<double>(victim.mask), Lift<double>(victim.label),
                                grads.values().data(), side);
  return grads;
}

GradDistance GradientDistance(const Params& params, const Gradients& target,
                              const DummyState& dummy, const std::optional<SoftLabel>& label) {
  CheckVictim(params, dummy.input);
  if (!(target.dims() == params.dims())) throw ConfigError("target gradient shape mismatch");
  const ParamLayout& layout = params.layout();
  const SoftLabel y = label ? *label : Softmax(dummy.label_logits);
  const std::vector<double> one = {1.0};
  const std::size_t n = params.values().size();

  // Pass 1: the dummy's gradient and the residual.
  std::vector<double> g(n, 0.0);
  HiddenGrads<double> side;
  HiddenExampleBackward<double>(layout, params.values().data(), {Lift<double>(dummy.input)}, one,
                                Lift<double>(dummy.mask), Lift<double>(y), g.data(), side);
  std::vector<double> r(n);
  GradDistance out;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = g[i] - target.values()[i];
    out.value += r[i] * r[i];
  }

  // Pass 2: perturb theta along r; the tangent of the input-side gradient is
  // J^T r, and d||r||^2/dv = 2 J^T r.
  std::vector<Dual> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = Dual(params.values()[i], r[i]);
  std::vector<Dual> g_dual(n, Dual(0.0));
  HiddenGrads<Dual> dual_side;
  HiddenExampleBackward<Dual>(layout, theta.data(), {Lift<Dual>(dummy.input)}, one,
                              Lift<Dual>(dummy.mask), Lift<Dual>(y), g_dual.data(), dual_side);
  out.d_input = Tangent(dual_side.d_inputs[0], 2.0);
  out.d_mask = Tangent(dual_side.d_mask, 2.0);
  if (!label) {
    const DenseVec d_y = Tangent(dual_side.d_label, 2.0);
    out.d_label_logits = (y.array() * (d_y.array() - y.dot(d_y))).matrix();
  }
  return out;
}

AttackOutcome GradMatchAttack(const Gradients& target, const Params& params,
                              const AttackTruth& truth, const std::optional<SoftLabel>& label,
                              bool optimize_mask, const AttackConfig& cfg, RngStream& stream,
                              const std::optional<DummyState>& init) {
  if (cfg.iterations < 1) throw ConfigError("attack needs at least one iteration");
  if (!(cfg.threshold > 0.0)) throw ConfigError("attack threshold must be positive");
  const int de = params.dims().embed_dim;
  const int d = params.dims().rep_dim;
  const int c = params.dims().num_classes;
  DummyState z;
  if (init) {
    z = *init;
  } else {
    z.input = StandardNormal(de, stream);
    if (optimize_mask) z.mask = StandardNormal(d, stream);
    if (!label) z.label_logits = StandardNormal(c, stream);
  }
  const auto n_in = static_cast<std::size_t>(z.input.size());
  const auto n_mask = static_cast<std::size_t>(z.mask.size());
  const auto n_label = static_cast<std::size_t>(z.label_logits.size());
  std::vector<double> flat(n_in + n_mask + n_label);
  std::vector<double> grad(flat.size());
  auto pack = [&](const DenseVec& a, const DenseVec& b, const DenseVec& l, std::vector<double>& v) {
    std::copy(a.data(), a.data() + n_in, v.begin());
    std::copy(b.data(), b.data() + n_mask, v.begin() + static_cast<std::ptrdiff_t>(n_in));
    std::copy(l.data(), l.data() + n_label,
              v.begin() + static_cast<std::ptrdiff_t>(n_in + n_mask));
  };
  auto unpack = [&]() {
    std::copy(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(n_in), z.input.data());
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(n_in),
              flat.begin() + static_cast<std::ptrdiff_t>(n_in + n_mask), z.mask.data());
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(n_in + n_mask), flat.end(),
              z.label_logits.data());
  };
  pack(z.input, z.mask, z.label_logits, flat);
  AdamState opt(cfg.optimizer, flat.size());

  AttackOutcome out;
  auto mask_mse = [&]() {
    return (z.mask.size() > 0 && truth.mask.size() == z.mask.size()) ? Mse(z.mask, truth.mask)
                                                                      : 0.0;
  };
  const int every = std::max(1, cfg.log_every);
  for (int it = 0; it <= cfg.iterations; ++it) {
    const GradDistance gd = GradientDistance(params, target, z, label);
    const double input_mse = Mse(z.input, truth.input);
    const bool last = it == cfg.iterations;
    if (!std::isfinite(gd.value) || !gd.d_input.allFinite() || !gd.d_mask.allFinite() ||
        !gd.d_label_logits.allFinite()) {
      out.diagnostic = "non-finite attack loss at iteration " + std::to_string(it);
      out.curve.push_back({it, gd.value, mask_mse(), input_mse});
      out.final_grad_distance = gd.value;
      out.final_input_mse = input_mse;
      out.final_mask_mse = mask_mse();
      break;
    }
    if (it % every == 0 || last) out.curve.push_back({it, gd.value, mask_mse(), input_mse});
    if (last) {
      out.final_grad_distance = gd.value;
      out.final_input_mse = input_mse;
      out.final_mask_mse = mask_mse();
      break;
    }
    pack(gd.d_input, gd.d_mask, gd.d_label_logits, grad);
    AdamStep(flat, grad, opt);
    unpack();
  }
  out.input = z.input;
  out.mask = z.mask;
  out.label = label ? *label : Softmax(z.label_logits);
  out.success = out.diagnostic.empty() && out.final_input_mse <= cfg.threshold;
  return out;
}

std::string GradMatchCell::Name() const {
  return "k" + std::to_string(k) + "_d" + std::to_string(d) + (masked ? "_mask" : "_nomask");
}

TrialRecord RunGradMatchTrial(const GradMatchCell& cell, int trial, const VictimModel& model,
                              const AttackConfig& cfg) {
  if (cell.k < 1 || cell.d < 1) throw ConfigError("grad-match cell needs k >= 1 and d >= 1");
  const RngStream base(cfg.seed, {"grad-match", cell.Name(), "trial", trial});
  const Params params = InitParams(model.Dims(cell.d), base.Child({"model"}));
  RngStream victim_stream = base.Child({"victim"});
  GradMatchVictim victim;
  victim.label = SoftLabel::Zero(model.num_classes);
  const DenseMat lambda = SampleLambda(1, cell.k, victim_stream);
  for (int j = 0; j < cell.k; ++j) {
    victim.inputs.push_back(StandardNormal(model.input_dim, victim_stream));
    const auto cls = static_cast<int>(
        victim_stream.UniformInt(static_cast<std::uint64_t>(model.num_classes)));
    victim.lambda.push_back(lambda(0, j));
    victim.label[cls] += lambda(0, j);
  }
  if (cell.masked) {
    RngStream pool_stream = base.Child({"pool"});
    const int m = cfg.fixed_single_mask ? 1 : 256;
    const MaskPool pool = GenMaskPool(m, cell.d, pool_stream);
    victim.mask = pool.masks[victim_stream.UniformInt(static_cast<std::uint64_t>(m))].signs;
  }
  const Gradients target = VictimGradients(params, victim);
  RngStream dummy_stream = base.Child({"dummy"});
  const std::optional<SoftLabel> label =
      cfg.reveal_true_label ? std::optional<SoftLabel>(victim.label) : std::nullopt;
  const AttackOutcome outcome =
      GradMatchAttack(target, params, {victim.inputs[0], victim.mask}, label, cell.masked, cfg,
                      dummy_stream);
  return {.trial = trial,
          .success = outcome.success,
          .final_grad_distance = outcome.final_grad_distance,
          .final_input_mse = outcome.final_input_mse,
          .final_mask_mse = outcome.final_mask_mse,
          .diagnostic = outcome.diagnostic,
          .curve = outcome.curve};
}

std::vector<CellResult> AttackSuccessRate(std::span<const GradMatchCell> grid,
                                          const VictimModel& model, const AttackConfig& cfg,
                                          int workers) {
  if (cfg.trials < 1) throw ConfigError("attack needs at least one trial");
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialRecord> records(grid.size() * trials);
  ParallelFor(records.size(), workers, [&](std::size_t task) {
    records[task] =
        RunGradMatchTrial(grid[task / trials], static_cast<int>(task % trials), model, cfg);
  });
  std::vector<CellResult> results;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    CellResult cell{.cell = grid[c]};
    int wins = 0;
    double mse = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      TrialRecord& r = records[c * trials + t];
      wins += r.success ? 1 : 0;
      mse += r.final_input_mse;
      cell.trials.push_back(std::move(r));
    }
    cell.success_rate = static_cast<double>(wins) / static_cast<double>(trials);
    cell.mean_final_input_mse = mse / static_cast<double>(trials);
    results.push_back(std::move(cell));
  }
  return results;
}

RssIndex RssBuildIndex(std::span<const std::int64_t> ids, std::span<const TokenIds> tokens,
                       const Params& params) {
  if (ids.empty()) throw ConfigError("cannot build a similarity index over an empty dataset");
  if (ids.size() != tokens.size()) throw ConfigError("index ids and sentences disagree");
  RssIndex index;
  index.ids.assign(ids.begin(), ids.end());
  index.reps.reserve(tokens.size());
  for (const TokenIds& t : tokens) index.reps.push_back(Encode(params, t));
  return index;
}

RssHit RssQuery(const RssIndex& index, const DenseVec& query) {
  if (index.size() == 0) throw ConfigError("similarity index is empty");
  if (!query.allFinite() || query.squaredNorm() == 0.0) throw NumericError("degenerate query");
  RssHit best{.id = index.ids[0], .row = 0, .similarity = -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < index.size(); ++i) {
    const double s = CosineSim(query, index.reps[i]);
    if (s > best.similarity || (s == best.similarity && index.ids[i] < best.id)) {
      best = {index.ids[i], i, s};
    }
  }
  return best;
}

std::vector<RssHit> RssQueryAll(const RssIndex& index, std::span<const DenseVec> queries,
                                int workers) {
  std::vector<RssHit> hits(queries.size());
  ParallelFor(queries.size(), workers,
              [&](std::size_t q) { hits[q] = RssQuery(index, queries[q]); });
  return hits;
}

// ---------------------------------------------------------------------------

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMat>;
using RowMap = Eigen::Map<RowMat>;

struct ReconOffsets {
  std::size_t w1, b1, w2, b2, w3, b3, total;
  ReconOffsets(int d, int h) {
    const auto dd = static_cast<std::size_t>(d);
    const auto hh = static_cast<std::size_t>(h);
    w1 = 0;
    b1 = w1 + hh * dd;
    w2 = b1 + hh;
    b2 = w2 + hh * hh;
    w3 = b2 + hh;
    b3 = w3 + dd * hh;
    total = b3 + dd;
  }
};

}  // namespace

ReconNet::ReconNet(int dim, int hidden, RngStream& stream) : dim_(dim), hidden_(hidden) {
  if (dim < 1 || hidden < 1) throw ConfigError("reconstruction net needs positive sizes");
  const ReconOffsets o(dim, hidden);
  params_.assign(o.total, 0.0);
  auto fill = [&](std::size_t begin, std::size_t count, double stddev) {
    for (std::size_t i = 0; i < count; ++i) params_[begin + i] = stddev * stream.Normal();
  };
  fill(o.w1, o.b1 - o.w1, std::sqrt(2.0 / dim));
  fill(o.w2, o.b2 - o.w2, std::sqrt(2.0 / hidden));
  fill(o.w3, o.b3 - o.w3, std::sqrt(1.0 / hidden));
}

DenseVec ReconNet::Forward(const DenseVec& x) const {
  if (x.size() != dim_) throw ConfigError("reconstruction input has wrong dimension");
  const ReconOffsets o(dim_, hidden_);
  const double* p = params_.data();
  const ConstRowMap w1(p + o.w1, hidden_, dim_);
  const ConstRowMap w2(p + o.w2, hidden_, hidden_);
  const ConstRowMap w3(p + o.w3, dim_, hidden_);
  const ConstVecMap b1(p + o.b1, hidden_);
  const ConstVecMap b2(p + o.b2, hidden_);
  const ConstVecMap b3(p + o.b3, dim_);
  const DenseVec h1 = (w1 * x + b1).cwiseMax(0.0);
  const DenseVec h2 = (w2 * h1 + b2).cwiseMax(0.0);
  return w3 * h2 + b3;
}

double ReconNet::LossAndGrad(std::span<const DenseVec> inputs, std::span<const DenseVec> targets,
                             std::vector<double>& grads) const {
  if (inputs.empty() || inputs.size() != targets.size()) {
    throw ConfigError("reconstruction batch is empty or unpaired");
  }
  const ReconOffsets o(dim_, hidden_);
  const auto n = static_cast<Eigen::Index>(inputs.size());
  // Columns are examples.
  Eigen::MatrixXd x(dim_, n);
  Eigen::MatrixXd y(dim_, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.col(i) = inputs[static_cast<std::size_t>(i)];
    y.col(i) = targets[static_cast<std::size_t>(i)];
  }
  const double* p = params_.data();
  const ConstRowMap w1(p + o.w1, hidden_, dim_);
  const ConstRowMap w2(p + o.w2, hidden_, hidden_);
  const ConstRowMap w3(p + o.w3, dim_, hidden_);
  const ConstVecMap b1(p + o.b1, hidden_);
  const ConstVecMap b2(p + o.b2, hidden_);
  const ConstVecMap b3(p + o.b3, dim_);
  const Eigen::MatrixXd h1 = ((w1 * x).colwise() + b1).cwiseMax(0.0);
  const Eigen::MatrixXd h2 = ((w2 * h1).colwise() + b2).cwiseMax(0.0);
  const Eigen::MatrixXd out = (w3 * h2).colwise() + b3;
  const Eigen::MatrixXd diff = out - y;
  const double scale = 1.0 / static_cast<double>(n * dim_);
  const double loss = diff.squaredNorm() * scale;

  grads.assign(o.total, 0.0);
  double* g = grads.data();
  const Eigen::MatrixXd d_out = 2.0 * scale * diff;
  RowMap(g + o.w3, dim_, hidden_) = d_out * h2.transpose();
  VecMap(g + o.b3, dim_) = d_out.rowwise().sum();
  const Eigen::MatrixXd d_h2 =
      ((w3.transpose() * d_out).array() * (h2.array() > 0.0).cast<double>()).matrix();
  RowMap(g + o.w2, hidden_, hidden_) = d_h2 * h1.transpose();
  VecMap(g + o.b2, hidden_) = d_h2.rowwise().sum();
  const Eigen::MatrixXd d_h1 =
      ((w2.transpose() * d_h2).array() * (h1.array() > 0.0).cast<double>()).matrix();
  RowMap(g + o.w1, hidden_, dim_) = d_h1 * x.transpose();
  VecMap(g + o.b1, hidden_) = d_h1.rowwise().sum();
  return loss;
}

ReconResult ReconTrain(std::span<const DenseVec> hidden, std::span<const DenseVec> raw,
                       const ReconConfig& cfg) {
  if (hidden.empty()) throw ConfigError("reconstruction needs at least one training pair");
  if (hidden.size() != raw.size()) throw ConfigError("reconstruction pairs are unbalanced");
  if (cfg.epochs < 0 || cfg.batch_size < 1) throw ConfigError("bad reconstruction schedule");
  const RngStream base(cfg.seed, {"reprecon"});
  RngStream init = base.Child({"init"});
  ReconResult result{.net = ReconNet(static_cast<int>(hidden[0].size()), cfg.hidden, init)};
  AdamState opt(cfg.optimizer, result.net.params().size());
  const std::size_t n = hidden.size();
  std::vector<std::size_t> order(n);
  std::vector<double> grads;
  std::vector<DenseVec> xb;
  std::vector<DenseVec> yb;
  for (int e = 0; e < cfg.epochs; ++e) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    RngStream shuffle = base.Child({"epoch", e});
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle.UniformInt(i)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      xb.clear();
      yb.clear();
      for (std::size_t i = start; i < end; ++i) {
        xb.push_back(hidden[order[i]]);
        yb.push_back(raw[order[i]]);
      }
      const double loss = result.net.LossAndGrad(xb, yb, grads);
      epoch_loss += loss * static_cast<double>(end - start);
      AdamStep(result.net.params(), grads, opt);
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(n));
  }
  result.final_loss = result.net.LossAndGrad(hidden, raw, grads);
  return result;
}

RssHit ReconAttack(const ReconNet& net, const DenseVec& hidden_query, const RssIndex& index) {
  return RssQuery(index, net.Forward(hidden_query));
}

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

SubsetSumResult SubsetSumRecover(std::span<const DenseVec> vectors, const DenseVec& target, int k,
                                 bool early_exit, double tolerance) {
  const int n = static_cast<int>(vectors.size());
  if (k < 1 || k > n) throw ConfigError("subset size must be in [1, N]");
  for (const DenseVec& v : vectors) {
    if (v.size() != target.size()) throw ConfigError("subset-sum vectors disagree in dimension");
  }
  SubsetSumResult result;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  DenseVec sum(target.size());
  while (true) {
    ++result.candidates;
    if (!result.indices) {
      sum = vectors[static_cast<std::size_t>(idx[0])];
      for (int i = 1; i < k; ++i) sum += vectors[static_cast<std::size_t>(idx[i])];
      if ((sum - target).cwiseAbs().maxCoeff() <= tolerance) {
        result.indices = idx;
        if (early_exit) return result;
      }
    }
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return result;
}

}  // namespace hidesim
