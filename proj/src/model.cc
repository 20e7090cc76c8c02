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
#include "hidesim/model.h"

#include <cmath>
#include <string>

#include "hidesim/errors.h"
#include "hidesim/model_math.h"

namespace hidesim {

ParamLayout::ParamLayout(const ModelDims& dims)
    : vocab_size(dims.vocab_size), embed_dim(dims.embed_dim), rep_dim(dims.rep_dim) {
  if (dims.vocab_size < 0 || dims.embed_dim < 1 || dims.rep_dim < 1 || dims.num_classes < 2) {
    throw ConfigError("model dims: vocab_size >= 0, embed_dim >= 1, rep_dim >= 1 and "
                      "num_classes >= 2 required");
  }
  std::size_t offset = 0;
  embedding = offset;
  offset += static_cast<std::size_t>(dims.vocab_size) * static_cast<std::size_t>(dims.embed_dim);
  projection_weight = offset;
  offset += static_cast<std::size_t>(dims.rep_dim) * static_cast<std::size_t>(dims.embed_dim);
  projection_bias = offset;
  offset += static_cast<std::size_t>(dims.rep_dim);
  encoder_size = offset;
  widths.push_back(dims.rep_dim);
  for (int h : dims.hidden) {
    if (h < 1) throw ConfigError("model dims: hidden widths must be positive");
    widths.push_back(h);
  }
  widths.push_back(dims.num_classes);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    layer_weight.push_back(offset);
    offset += static_cast<std::size_t>(widths[l]) * static_cast<std::size_t>(widths[l + 1]);
    layer_bias.push_back(offset);
    offset += static_cast<std::size_t>(widths[l + 1]);
  }
  total = offset;
}

Params::Params(ModelDims dims) : dims_(std::move(dims)), layout_(dims_), values_(layout_.total, 0.0) {}

MatMap Params::embedding() {
  return MatMap(values_.data() + layout_.embedding, dims_.vocab_size, dims_.embed_dim);
}
ConstMatMap Params::embedding() const {
  return ConstMatMap(values_.data() + layout_.embedding, dims_.vocab_size, dims_.embed_dim);
}
MatMap Params::projection_weight() {
  return MatMap(values_.data() + layout_.projection_weight, dims_.rep_dim, dims_.embed_dim);
}
VecMap Params::projection_bias() {
  return VecMap(values_.data() + layout_.projection_bias, dims_.rep_dim);
}
MatMap Params::layer_weight(int layer) {
  const auto l = static_cast<std::size_t>(layer);
  return MatMap(values_.data() + layout_.layer_weight.at(l), layout_.widths[l + 1],
                layout_.widths[l]);
}
VecMap Params::layer_bias(int layer) {
  const auto l = static_cast<std::size_t>(layer);
  return VecMap(values_.data() + layout_.layer_bias.at(l), layout_.widths[l + 1]);
}

void Params::SetZero() { std::fill(values_.begin(), values_.end(), 0.0); }

Params InitParams(const ModelDims& dims, const RngStream& stream) {
  Params params(dims);
  RngStream emb = stream.Child({"embedding"});
  auto e = params.embedding();
  for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = emb.Normal();
  RngStream proj = stream.Child({"projection"});
  const double proj_scale = 1.0 / std::sqrt(static_cast<double>(dims.embed_dim));
  auto w = params.projection_weight();
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = proj_scale * proj.Normal();
  for (int l = 0; l < params.num_layers(); ++l) {
    RngStream layer = stream.Child({"layer", l});
    auto lw = params.layer_weight(l);
    const double scale = std::sqrt(2.0 / static_cast<double>(lw.cols()));
    for (Eigen::Index i = 0; i < lw.size(); ++i) lw.data()[i] = scale * layer.Normal();
  }
  return params;
}

namespace {

void CheckTokens(const Params& params, std::span<const int> token_ids) {
  if (token_ids.empty()) throw ConfigError("encode: empty token list");
  for (int t : token_ids) {
    if (t < 0 || t >= params.dims().vocab_size) {
      throw ConfigError("encode: token id " + std::to_string(t) + " outside vocabulary of " +
                        std::to_string(params.dims().vocab_size));
    }
  }
}

std::span<const double> Span(const DenseVec& v) {
  return std::span<const double>(v.data(), static_cast<std::size_t>(v.size()));
}

DenseVec ToVec(const std::vector<double>& v) {
  return Eigen::Map<const DenseVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Encoder backward for one source sentence.
void EncoderBackward(const Params& params, std::span<const int> tokens, const DenseVec& pooled,
                     const DenseVec& rep, const DenseVec& d_rep, Gradients& grads) {
  std::vector<double> d_pooled;
  math::ProjectionBackward<double>(params.layout(), params.values().data(), Span(pooled),
                                   Span(rep), Span(d_rep), grads.values().data(), d_pooled);
  const int de = params.dims().embed_dim;
  const double inv_len = 1.0 / static_cast<double>(tokens.size());
  double* ge = grads.values().data() + params.layout().embedding;
  for (int t : tokens) {
    for (int c = 0; c < de; ++c) ge[t * de + c] += d_pooled[static_cast<std::size_t>(c)] * inv_len;
  }
}

struct ClassifierStep {
  double loss;
  DenseVec d_input;
};

ClassifierStep ClassifierLossBackward(const Params& params, const DenseVec& input,
                                      const SoftLabel& target, double scale, Gradients& grads) {
  math::ClassifierTrace<double> trace;
  math::ClassifierForward<double>(params.layout(), params.values().data(), Span(input), trace);
  const std::span<const double> probs(trace.probs);
  const double loss = math::SoftCrossEntropy<double>(probs, Span(target));
  const auto d_logits = math::SoftCrossEntropyLogitGrad<double>(probs, Span(target), scale);
  std::vector<double> d_input;
  math::ClassifierBackward<double>(params.layout(), params.values().data(), trace, d_logits,
                                   grads.values().data(), d_input);
  return {loss, ToVec(d_input)};
}

}  // namespace

DenseVec PoolEmbeddings(const Params& params, std::span<const int> token_ids) {
  CheckTokens(params, token_ids);
  const auto emb = params.embedding();
  DenseVec pooled = emb.row(token_ids[0]).transpose();
  for (std::size_t i = 1; i < token_ids.size(); ++i) pooled += emb.row(token_ids[i]).transpose();
  pooled *= 1.0 / static_cast<double>(token_ids.size());
  return pooled;
}

DenseVec EncodePooled(const Params& params, const DenseVec& pooled) {
  if (pooled.size() != params.dims().embed_dim) {
    throw ConfigError("encode: pooled input has wrong dimension");
  }
  std::vector<double> rep;
  math::ProjectionForward<double>(params.layout(), params.values().data(), Span(pooled), rep);
  return ToVec(rep);
}

DenseVec Encode(const Params& params, std::span<const int> token_ids) {
  return EncodePooled(params, PoolEmbeddings(params, token_ids));
}

SoftLabel Classify(const Params& params, const DenseVec& rep) {
  if (rep.size() != params.dims().rep_dim) {
    throw ConfigError("classify: representation dimension " + std::to_string(rep.size()) +
                      " != " + std::to_string(params.dims().rep_dim));
  }
  math::ClassifierTrace<double> trace;
  math::ClassifierForward<double>(params.layout(), params.values().data(), Span(rep), trace);
  return ToVec(trace.probs);
}

double SoftCeLoss(const SoftLabel& pred, const SoftLabel& target) {
  if (pred.size() != target.size()) throw ConfigError("soft_ce_loss: size mismatch");
  return math::SoftCrossEntropy<double>(Span(pred), Span(target));
}

SoftLabel OneHot(int label, int num_classes) {
  if (label < 0 || label >= num_classes) {
    throw ConfigError("label " + std::to_string(label) + " outside [0, " +
                      std::to_string(num_classes) + ")");
  }
  SoftLabel y = SoftLabel::Zero(num_classes);
  y[label] = 1.0;
  return y;
}

LossAndGrads BackwardBatch(const Params& params, std::span<const TokenIds> sources,
                           const HiddenBatch& hidden, const HideKey& key) {
  const std::size_t b = hidden.size();
  if (b == 0) throw ConfigError("backward_batch: empty hidden batch");
  if (key.slots.size() != b || key.masks.size() != b || hidden.labels.size() != b) {
    throw ConfigError("backward_batch: missing or mismatched encryption key context");
  }
  // Forward through the encoder for every private source.
  std::vector<DenseVec> pooled(sources.size());
  std::vector<DenseVec> reps(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    pooled[s] = PoolEmbeddings(params, sources[s]);
    reps[s] = EncodePooled(params, pooled[s]);
  }

  LossAndGrads out{0.0, Gradients(params.dims())};
  const double scale = 1.0 / static_cast<double>(b);
  std::vector<DenseVec> d_reps(sources.size());
  std::vector<bool> touched(sources.size(), false);
  for (std::size_t i = 0; i < b; ++i) {
    if (hidden.reps[i].size() != params.dims().rep_dim) {
      throw ConfigError("backward_batch: hidden representation has wrong dimension");
    }
    const ClassifierStep step =
        ClassifierLossBackward(params, hidden.reps[i], hidden.labels[i], scale, out.grads);
    out.loss += step.loss;
    // d e~ / d e_j = lambda_j diag(sigma)
    DenseVec d_mixed = step.d_input;
    ApplyMask(key.masks[i], d_mixed);
    for (const MixSlot& slot : key.slots[i]) {
      if (slot.source != SlotSource::kPrivate) continue;
      const auto s = static_cast<std::size_t>(slot.index);
      if (s >= sources.size()) throw ConfigError("backward_batch: key references unknown source");
      if (touched[s]) {
        d_reps[s] += slot.weight * d_mixed;
      } else {
        d_reps[s] = slot.weight * d_mixed;
        touched[s] = true;
      }
    }
  }
  out.loss *= scale;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if (!touched[s]) continue;
    EncoderBackward(params, sources[s], pooled[s], reps[s], d_reps[s], out.grads);
  }
  return out;
}

LossAndGrads BackwardPlain(const Params& params, std::span<const TokenIds> sources,
                           std::span<const SoftLabel> labels) {
  if (sources.empty()) throw ConfigError("backward_plain: empty batch");
  if (labels.size() != sources.size()) throw ConfigError("backward_plain: label count mismatch");
  const std::size_t b = sources.size();
  std::vector<DenseVec> pooled(b);
  std::vector<DenseVec> reps(b);
  for (std::size_t s = 0; s < b; ++s) {
    pooled[s] = PoolEmbeddings(params, sources[s]);
    reps[s] = EncodePooled(params, pooled[s]);
  }
  LossAndGrads out{0.0, Gradients(params.dims())};
  const double scale = 1.0 / static_cast<double>(b);
  std::vector<DenseVec> d_reps(b);
  for (std::size_t i = 0; i < b; ++i) {
    ClassifierStep step = ClassifierLossBackward(params, reps[i], labels[i], scale, out.grads);
    out.loss += step.loss;
    d_reps[i] = std::move(step.d_input);
  }
  out.loss *= scale;
  for (std::size_t s = 0; s < b; ++s) {
    EncoderBackward(params, sources[s], pooled[s], reps[s], d_reps[s], out.grads);
  }
  return out;
}

}  // namespace hidesim
