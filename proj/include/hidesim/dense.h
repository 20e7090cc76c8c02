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
#ifndef HIDESIM_DENSE_H_
#define HIDESIM_DENSE_H_

#include <Eigen/Dense>
#include <span>

namespace hidesim {

using DenseVec = Eigen::VectorXd;
using DenseMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VecMap = Eigen::Map<DenseVec>;
using ConstVecMap = Eigen::Map<const DenseVec>;
using MatMap = Eigen::Map<DenseMat>;
using ConstMatMap = Eigen::Map<const DenseMat>;

inline ConstVecMap AsVec(std::span<const double> values) {
  return ConstVecMap(values.data(), static_cast<Eigen::Index>(values.size()));
}
inline VecMap AsVec(std::span<double> values) {
  return VecMap(values.data(), static_cast<Eigen::Index>(values.size()));
}

// u.v / (|u| |v|). Zero vectors have similarity 0. Throws ConfigError on a
// dimension mismatch.
double CosineSim(std::span<const double> u, std::span<const double> v);
inline double CosineSim(const DenseVec& u, const DenseVec& v) {
  return CosineSim(std::span<const double>(u.data(), u.size()),
                   std::span<const double>(v.data(), v.size()));
}

// Mean of squared coordinate differences.
double Mse(std::span<const double> u, std::span<const double> v);
inline double Mse(const DenseVec& u, const DenseVec& v) {
  return Mse(std::span<const double>(u.data(), u.size()),
             std::span<const double>(v.data(), v.size()));
}

bool AllFinite(std::span<const double> values);

}  // namespace hidesim

#endif  // HIDESIM_DENSE_H_
