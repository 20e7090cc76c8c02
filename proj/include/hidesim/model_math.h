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
#ifndef HIDESIM_MODEL_MATH_H_
#define HIDESIM_MODEL_MATH_H_

// Scalar-generic forward/backward kernels over the flat parameter layout.
// The training path instantiates them with double; the gradient-matching
// attack also instantiates them with a forward-mode dual number to get
// gradient-of-gradient products.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hidesim/model_layout.h"

namespace hidesim::math {

using std::exp;
using std::log;
using std::tanh;

template <typename T>
struct ClassifierTrace {
  // activations[0] is the input; activations[l + 1] the output of layer l
  // (post-ReLU for hidden layers, logits for the last one).
  std::vector<std::vector<T>> activations;
  std::vector<T> probs;
};

// Projection of a pooled embedding: rep = tanh(W pooled + b).
template <typename T>
void ProjectionForward(const ParamLayout& layout, const T* theta, std::span<const T> pooled,
                       std::vector<T>& rep) {
  const int d = layout.rep_dim;
  const int de = layout.embed_dim;
  rep.assign(static_cast<std::size_t>(d), T(0.0));
  const T* w = theta + layout.projection_weight;
  const T* b = theta + layout.projection_bias;
  for (int r = 0; r < d; ++r) {
    T acc = b[r];
    for (int c = 0; c < de; ++c) acc += w[r * de + c] * pooled[static_cast<std::size_t>(c)];
    rep[static_cast<std::size_t>(r)] = tanh(acc);
  }
}

// Accumulates into grad_theta (projection block) and writes d(pooled).
template <typename T>
void ProjectionBackward(const ParamLayout& layout, const T* theta, std::span<const T> pooled,
                        std::span<const T> rep, std::span<const T> d_rep, T* grad_theta,
                        std::vector<T>& d_pooled) {
  const int d = layout.rep_dim;
  const int de = layout.embed_dim;
  const T* w = theta + layout.projection_weight;
  T* gw = grad_theta + layout.projection_weight;
  T* gb = grad_theta + layout.projection_bias;
  d_pooled.assign(static_cast<std::size_t>(de), T(0.0));
  for (int r = 0; r < d; ++r) {
    const T h = rep[static_cast<std::size_t>(r)];
    const T da = d_rep[static_cast<std::size_t>(r)] * (T(1.0) - h * h);
    gb[r] += da;
    for (int c = 0; c < de; ++c) {
      gw[r * de + c] += da * pooled[static_cast<std::size_t>(c)];
      d_pooled[static_cast<std::size_t>(c)] += w[r * de + c] * da;
    }
  }
}

template <typename T>
void ClassifierForward(const ParamLayout& layout, const T* theta, std::span<const T> input,
                       ClassifierTrace<T>& trace) {
  const std::size_t num_layers = layout.layer_weight.size();
  trace.activations.resize(num_layers + 1);
  trace.activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < num_layers; ++l) {
    const int in = layout.widths[l];
    const int out = layout.widths[l + 1];
    const T* w = theta + layout.layer_weight[l];
    const T* b = theta + layout.layer_bias[l];
    const std::vector<T>& x = trace.activations[l];
    std::vector<T>& y = trace.activations[l + 1];
    y.assign(static_cast<std::size_t>(out), T(0.0));
    const bool hidden = l + 1 < num_layers;
    for (int r = 0; r < out; ++r) {
      T acc = b[r];
      for (int c = 0; c < in; ++c) acc += w[r * in + c] * x[static_cast<std::size_t>(c)];
      if (hidden && !(acc > 0.0)) acc = T(0.0);
      y[static_cast<std::size_t>(r)] = acc;
    }
  }
  const std::vector<T>& logits = trace.activations.back();
  T max_logit = logits[0];
  for (const T& z : logits) {
    if (z > max_logit) max_logit = z;
  }
  trace.probs.resize(logits.size());
  T total(0.0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    trace.probs[i] = exp(logits[i] - max_logit);
    total += trace.probs[i];
  }
  for (T& p : trace.probs) p = p / total;
}

inline constexpr double kLogFloor = 1e-12;

// -sum_c target_c * ln(p_c + 1e-12)
template <typename T>
T SoftCrossEntropy(std::span<const T> probs, std::span<const T> target) {
  T loss(0.0);
  for (std::size_t c = 0; c < probs.size(); ++c) {
    loss -= target[c] * log(probs[c] + T(kLogFloor));
  }
  return loss;
}

// d loss / d logits for SoftCrossEntropy after softmax, scaled by `scale`.
template <typename T>
std::vector<T> SoftCrossEntropyLogitGrad(std::span<const T> probs, std::span<const T> target,
                                         double scale) {
  const std::size_t n = probs.size();
  std::vector<T> g(n);
  T dot(0.0);
  for (std::size_t c = 0; c < n; ++c) {
    g[c] = -target[c] / (probs[c] + T(kLogFloor));
    dot += probs[c] * g[c];
  }
  std::vector<T> out(n);
  for (std::size_t c = 0; c < n; ++c) out[c] = T(scale) * (probs[c] * (g[c] - dot));
  return out;
}

// d loss / d target
template <typename T>
std::vector<T> SoftCrossEntropyTargetGrad(std::span<const T> probs, double scale) {
  std::vector<T> out(probs.size());
  for (std::size_t c = 0; c < probs.size(); ++c) {
    out[c] = T(-scale) * log(probs[c] + T(kLogFloor));
  }
  return out;
}

// Accumulates classifier parameter gradients and writes d(input).
template <typename T>
void ClassifierBackward(const ParamLayout& layout, const T* theta,
                        const ClassifierTrace<T>& trace, std::span<const T> d_logits,
                        T* grad_theta, std::vector<T>& d_input) {
  const std::size_t num_layers = layout.layer_weight.size();
  std::vector<T> upstream(d_logits.begin(), d_logits.end());
  for (std::size_t li = num_layers; li-- > 0;) {
    const int in = layout.widths[li];
    const int out = layout.widths[li + 1];
    const T* w = theta + layout.layer_weight[li];
    T* gw = grad_theta + layout.layer_weight[li];
    T* gb = grad_theta + layout.layer_bias[li];
    const std::vector<T>& x = trace.activations[li];
    const std::vector<T>& y = trace.activations[li + 1];
    const bool hidden = li + 1 < num_layers;
    std::vector<T> down(static_cast<std::size_t>(in), T(0.0));
    for (int r = 0; r < out; ++r) {
      T delta = upstream[static_cast<std::size_t>(r)];
      if (hidden && !(y[static_cast<std::size_t>(r)] > 0.0)) continue;
      gb[r] += delta;
      for (int c = 0; c < in; ++c) {
        gw[r * in + c] += delta * x[static_cast<std::size_t>(c)];
        down[static_cast<std::size_t>(c)] += w[r * in + c] * delta;
      }
    }
    upstream = std::move(down);
  }
  d_input = std::move(upstream);
}

}  // namespace hidesim::math

#endif  // HIDESIM_MODEL_MATH_H_
