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
#ifndef HIDESIM_GRAD_CHECK_H_
#define HIDESIM_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hidesim {

using ScalarFn = std::function<double(std::span<const double>)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares `analytic` with central differences of `loss_fn` at `params`:
//   err_i = |a_i - n_i| / max(1e-8, |a_i| + |n_i|)
// Throws ConfigError if eps <= 0 or sizes differ, NumericError (naming the
// coordinate) if the loss is not finite.
GradCheckResult GradCheck(const ScalarFn& loss_fn, std::span<const double> params,
                          std::span<const double> analytic, double eps);

// Central-difference gradient alone.
std::vector<double> NumericGradient(const ScalarFn& loss_fn, std::span<const double> params,
                                    double eps);

}  // namespace hidesim

#endif  // HIDESIM_GRAD_CHECK_H_
