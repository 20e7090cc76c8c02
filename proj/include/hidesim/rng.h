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
#ifndef HIDESIM_RNG_H_
#define HIDESIM_RNG_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hidesim {

// Identifies the generator family in reports. Bump whenever the key
// derivation or any draw routine changes.
inline constexpr std::string_view kRngVersion = "hidesim-rng-v1/splitmix64+xoshiro256**";

using LabelPart = std::variant<std::string, std::int64_t>;
using LabelPath = std::vector<LabelPart>;

// A keyed random stream. The state is derived only from (root_seed,
// label_path), so the sequence a consumer sees does not depend on which
// thread runs it or on what other streams have drawn.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, LabelPath label_path);

  // Stream keyed by this stream's path extended with `parts`.
  RngStream Child(LabelPath parts) const;

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform();
  // Standard normal (Box-Muller, second variate cached).
  double Normal();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  // +1.0 or -1.0 with equal probability.
  double Rademacher();

  std::uint64_t root_seed() const { return root_seed_; }
  const LabelPath& label_path() const { return label_path_; }

 private:
  std::uint64_t root_seed_;
  LabelPath label_path_;
  std::array<std::uint64_t, 4> state_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

RngStream SeededStream(std::uint64_t root_seed, LabelPath label_path);

// Fisher-Yates over [0, n).
std::vector<int> Permutation(int n, RngStream& stream);

// Human-readable rendering, e.g. "client/3/epoch/7/mask".
std::string FormatLabelPath(const LabelPath& path);

}  // namespace hidesim

#endif  // HIDESIM_RNG_H_
