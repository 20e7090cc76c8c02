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
#include "hidesim/rng.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "hidesim/errors.h"

namespace hidesim {
namespace {

std::uint64_t SplitMix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Absorb(std::uint64_t h, std::uint64_t word) {
  std::uint64_t x = h ^ word;
  return SplitMix64(x);
}

std::uint64_t DeriveKey(std::uint64_t root_seed, const LabelPath& path) {
  std::uint64_t h = Absorb(0x6869646573696dULL, root_seed);
  for (const LabelPart& part : path) {
    if (const auto* s = std::get_if<std::string>(&part)) {
      h = Absorb(h, 0x5354ULL ^ (static_cast<std::uint64_t>(s->size()) << 16));
      // Eight bytes per word, little-endian packing.
      for (std::size_t i = 0; i < s->size(); i += 8) {
        std::uint64_t word = 0;
        for (std::size_t j = 0; j < 8 && i + j < s->size(); ++j) {
          word |= static_cast<std::uint64_t>(static_cast<unsigned char>((*s)[i + j]))
                  << (8 * j);
        }
        h = Absorb(h, word);
      }
    } else {
      h = Absorb(h, 0x494eULL);
      h = Absorb(h, static_cast<std::uint64_t>(std::get<std::int64_t>(part)));
    }
  }
  return h;
}

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, LabelPath label_path)
    : root_seed_(root_seed), label_path_(std::move(label_path)) {
  std::uint64_t key = DeriveKey(root_seed_, label_path_);
  for (auto& word : state_) word = SplitMix64(key);
}

RngStream RngStream::Child(LabelPath parts) const {
  LabelPath path = label_path_;
  path.insert(path.end(), parts.begin(), parts.end());
  return RngStream(root_seed_, std::move(path));
}

std::uint64_t RngStream::NextU64() {
  // xoshiro256**
  const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::Normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t RngStream::UniformInt(std::uint64_t n) {
  if (n == 0) throw ConfigError("UniformInt: n must be positive");
  // Lemire's multiply-shift with rejection.
  unsigned __int128 product = static_cast<unsigned __int128>(NextU64()) * n;
  auto low = static_cast<std::uint64_t>(product);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(NextU64()) * n;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double RngStream::Rademacher() { return (NextU64() >> 63) != 0 ? 1.0 : -1.0; }

RngStream SeededStream(std::uint64_t root_seed, LabelPath label_path) {
  return RngStream(root_seed, std::move(label_path));
}

std::string FormatLabelPath(const LabelPath& path) {
  std::string out;
  for (const LabelPart& part : path) {
    if (!out.empty()) out += '/';
    if (const auto* s = std::get_if<std::string>(&part)) {
      out += *s;
    } else {
      out += std::to_string(std::get<std::int64_t>(part));
    }
  }
  return out;
}

std::vector<int> Permutation(int n, RngStream& stream) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(stream.UniformInt(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

}  // namespace hidesim
