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

#ifndef HIDESIM_DUAL_H_
#define HIDESIM_DUAL_H_

#include <cmath>

namespace hidesim {

// Forward-mode dual number value + tangent * eps, eps^2 = 0.
struct Dual {
  double v = 0.0;
  double t = 0.0;

  Dual() = default;
  // Implicit so the scalar-generic kernels can write T(0.0).
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  Dual(double value, double tangent) : v(value), t(tangent) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    t += o.t;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    t -= o.t;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    t = t * o.v + v * o.t;
    v *= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(const Dual& a, const Dual& b) {
  return {a.v / b.v, (a.t * b.v - a.v * b.t) / (b.v * b.v)};
}
inline Dual operator-(const Dual& a) { return {-a.v, -a.t}; }

// Comparisons look at the value only (branch selection).
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator>(const Dual& a, double b) { return a.v > b; }

inline Dual tanh(const Dual& a) {
  const double y = std::tanh(a.v);
  return {y, a.t * (1.0 - y * y)};
}
inline Dual exp(const Dual& a) {
  const double y = std::exp(a.v);
  return {y, a.t * y};
}
inline Dual log(const Dual& a) { return {std::log(a.v), a.t / a.v}; }

}  // namespace hidesim

#endif  // HIDESIM_DUAL_H_
