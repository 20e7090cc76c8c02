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
#ifndef HIDESIM_MODEL_H_
#define HIDESIM_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hidesim/dense.h"
#include "hidesim/model_layout.h"
#include "hidesim/rng.h"
#include "hidesim/texthide.h"

namespace hidesim {

// Encoder (theta1) and classifier (theta2) parameters in one flat vector.
// Gradients use the same type, so every shape congruence check is a layout
// comparison.
class Params {
 public:
  explicit Params(ModelDims dims);

  const ModelDims& dims() const { return dims_; }
  const ParamLayout& layout() const { return layout_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> encoder() { return std::span<double>(values_).first(layout_.encoder_size); }
  std::span<const double> encoder() const {
    return std::span<const double>(values_).first(layout_.encoder_size);
  }
  std::span<double> classifier() {
    return std::span<double>(values_).subspan(layout_.encoder_size);
  }
  std::span<const double> classifier() const {
    return std::span<const double>(values_).subspan(layout_.encoder_size);
  }

  MatMap embedding();
  ConstMatMap embedding() const;
  MatMap projection_weight();
  VecMap projection_bias();
  int num_layers() const { return static_cast<int>(layout_.layer_weight.size()); }
  MatMap layer_weight(int layer);
  VecMap layer_bias(int layer);

  void SetZero();
  bool operator==(const Params& other) const {
    return dims_ == other.dims_ && values_ == other.values_;
  }

 private:
  ModelDims dims_;
  ParamLayout layout_;
  std::vector<double> values_;
};

using Gradients = Params;

// Embedding ~ N(0, 1); projection ~ N(0, 1/embed_dim); classifier layers
// He-normal; biases zero. Draws are keyed under `stream`'s label path.
Params InitParams(const ModelDims& dims, const RngStream& stream);

// Token ids for a sentence under the model vocabulary.
using TokenIds = std::vector<int>;

// Mean of the token embeddings (the encoder input below the projection).
DenseVec PoolEmbeddings(const Params& params, std::span<const int> token_ids);

// tanh(W mean(E[t]) + b). Throws ConfigError on an empty sentence or an
// out-of-range token id.
DenseVec Encode(const Params& params, std::span<const int> token_ids);
// Same projection applied to an already pooled (continuous) input.
DenseVec EncodePooled(const Params& params, const DenseVec& pooled);

// Softmax of the ReLU MLP output.
SoftLabel Classify(const Params& params, const DenseVec& rep);

// -sum_c target_c ln(pred_c + 1e-12)
double SoftCeLoss(const SoftLabel& pred, const SoftLabel& target);

SoftLabel OneHot(int label, int num_classes);

struct LossAndGrads {
  double loss = 0.0;
  Gradients grads;
};

// Mean soft cross-entropy over a hidden batch and its exact gradient with
// respect to both parameter blocks. `sources` are the token ids of the
// encoding batch the hidden batch was built from; the key routes each hidden
// example's gradient back to its private sources (lambda_j * sigma). Public
// partners are constants. Throws ConfigError if the key does not match the
// batch.
LossAndGrads BackwardBatch(const Params& params, std::span<const TokenIds> sources,
                           const HiddenBatch& hidden, const HideKey& key);

// The same objective with the encryption step bypassed: the classifier sees
// the raw representations and one-hot labels.
LossAndGrads BackwardPlain(const Params& params, std::span<const TokenIds> sources,
                           std::span<const SoftLabel> labels);

// Model checkpoint: "THMC", u32 version, dims, flat parameters (LE f64), then
// named auxiliary blocks (optimizer moments, resume state).
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Params params;
  std::map<std::string, std::vector<double>> extra;
};

void WriteCheckpoint(const std::filesystem::path& path, const Params& params,
                     const std::map<std::string, std::vector<double>>& extra = {});
Checkpoint ReadCheckpoint(const std::filesystem::path& path);
std::vector<std::uint8_t> SerializeCheckpoint(
    const Params& params, const std::map<std::string, std::vector<double>>& extra = {});
Checkpoint DeserializeCheckpoint(std::span<const std::uint8_t> bytes);

}  // namespace hidesim

#endif  // HIDESIM_MODEL_H_
