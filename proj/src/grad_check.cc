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
#include "hidesim/grad_check.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hidesim/errors.h"

namespace hidesim {

std::vector<double> NumericGradient(const ScalarFn& loss_fn, std::span<const double> params,
                                    double eps) {
  if (!(eps > 0.0)) throw ConfigError("grad_check: eps must be positive");
  std::vector<double> probe(params.begin(), params.end());
  std::vector<double> numeric(params.size());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + eps;
    const double plus = loss_fn(probe);
    probe[i] = saved - eps;
    const double minus = loss_fn(probe);
    probe[i] = saved;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("grad_check: non-finite loss when perturbing coordinate " +
                         std::to_string(i));
    }
    numeric[i] = (plus - minus) / (2.0 * eps);
  }
  return numeric;
}

GradCheckResult GradCheck(const ScalarFn& loss_fn, std::span<const double> params,
                          std::span<const double> analytic, double eps) {
  if (analytic.size() != params.size()) {
    throw ConfigError("grad_check: analytic gradient has wrong length");
  }
  const std::vector<double> numeric = NumericGradient(loss_fn, params, eps);
  GradCheckResult result;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double denom = std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric[i]));
    const double err = std::abs(analytic[i] - numeric[i]) / denom;
    if (i == 0 || err > result.max_rel_error) {
      result.max_rel_error = err;
      result.worst_index = i;
      result.worst_analytic = analytic[i];
      result.worst_numeric = numeric[i];
    }
  }
  return result;
}

}  // namespace hidesim
