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
#ifndef HIDESIM_OPTIM_H_
#define HIDESIM_OPTIM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace hidesim {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Decoupled (AdamW-style) decay; 0 gives plain Adam.
  double weight_decay = 0.0;
};

// Moment accumulators for one flat parameter vector.
struct AdamState {
  AdamState() = default;
  AdamState(AdamConfig config, std::size_t num_params)
      : config(config), first_moment(num_params, 0.0), second_moment(num_params, 0.0) {}

  AdamConfig config;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step = 0;
};

// One bias-corrected Adam update in place. Throws ConfigError when params,
// grads and the moment buffers disagree in length.
void AdamStep(std::span<double> params, std::span<const double> grads, AdamState& state);

// params -= learning_rate * grads. Test and protocol-exactness use only.
void SgdStep(std::span<double> params, std::span<const double> grads, double learning_rate);

}  // namespace hidesim

#endif  // HIDESIM_OPTIM_H_
