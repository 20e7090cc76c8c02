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
#include "hidesim/texthide.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "hidesim/errors.h"

namespace hidesim {
namespace {

void CheckBatch(std::span<const DenseVec> reps, std::span<const SoftLabel> labels, int k,
                const MaskAssignment& masks) {
  if (k < 1) throw ConfigError("texthide: k must be at least 1");
  if (reps.empty()) throw ConfigError("texthide: empty encoding batch");
  if (labels.size() != reps.size()) throw ConfigError("texthide: labels/reps size mismatch");
  if (masks.masks.size() != reps.size()) {
    throw ConfigError("texthide: need one mask entry per example");
  }
  const auto d = reps[0].size();
  for (const DenseVec& r : reps) {
    if (r.size() != d) throw ConfigError("texthide: representations differ in dimension");
  }
  for (const DenseVec& m : masks.masks) {
    if (m.size() != 0 && m.size() != d) {
      throw ConfigError("texthide: mask dimension " + std::to_string(m.size()) +
                        " does not match representation dimension " + std::to_string(d));
    }
  }
}

// sum_j w_j v_j with the first term assigned rather than added to zero, so a
// single unit-weight term reproduces its input bit for bit.
template <typename Getter>
DenseVec WeightedSum(const std::vector<MixSlot>& slots, Getter get) {
  DenseVec out = slots[0].weight * get(slots[0]);
  for (std::size_t j = 1; j < slots.size(); ++j) out += slots[j].weight * get(slots[j]);
  return out;
}

HiddenBatch Assemble(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                     std::span<const DenseVec> public_reps, const HideKey& key) {
  HiddenBatch batch;
  const std::size_t b = reps.size();
  batch.reps.reserve(b);
  batch.labels.reserve(b);
  for (std::size_t i = 0; i < b; ++i) {
    const auto& slots = key.slots[i];
    DenseVec mixed = WeightedSum(slots, [&](const MixSlot& s) -> const DenseVec& {
      return s.source == SlotSource::kPrivate ? reps[static_cast<std::size_t>(s.index)]
                                              : public_reps[static_cast<std::size_t>(s.index)];
    });
    ApplyMask(key.masks[i], mixed);
    batch.reps.push_back(std::move(mixed));

    std::vector<MixSlot> private_slots;
    double private_weight = 0.0;
    for (const MixSlot& s : slots) {
      if (s.source == SlotSource::kPrivate) {
        private_slots.push_back(s);
        private_weight += s.weight;
      }
    }
    SoftLabel label = WeightedSum(private_slots, [&](const MixSlot& s) -> const SoftLabel& {
      return labels[static_cast<std::size_t>(s.index)];
    });
    if (private_slots.size() != slots.size()) label /= private_weight;
    batch.labels.push_back(std::move(label));
  }
  return batch;
}

}  // namespace

MaskPool GenMaskPool(int m, int d, RngStream& stream, std::string owner) {
  if (m < 0) throw ConfigError("gen_mask_pool: m must be non-negative");
  if (d < 1) throw ConfigError("gen_mask_pool: d must be positive");
  MaskPool pool;
  pool.dim = d;
  pool.owner = std::move(owner);
  pool.masks.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Mask mask{DenseVec(d)};
    for (int j = 0; j < d; ++j) mask.signs[j] = stream.Rademacher();
    pool.masks.push_back(std::move(mask));
  }
  return pool;
}

DenseMat SampleLambda(int b, int k, RngStream& stream) {
  if (k < 1) throw ConfigError("sample_lambda: k must be at least 1");
  DenseMat lambda(b, k);
  for (int i = 0; i < b; ++i) {
    double total = 0.0;
    while (total == 0.0) {
      total = 0.0;
      for (int j = 0; j < k; ++j) {
        lambda(i, j) = std::abs(stream.Normal());
        total += lambda(i, j);
      }
    }
    for (int j = 0; j < k; ++j) lambda(i, j) /= total;
  }
  return lambda;
}

std::vector<std::vector<int>> GenPermutations(int b, int k, RngStream& stream) {
  if (k < 1) throw ConfigError("gen_permutations: k must be at least 1");
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(k), std::vector<int>(b));
  for (auto& perm : perms) std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t j = 1; j < perms.size(); ++j) {
    auto& perm = perms[j];
    // Fisher-Yates
    for (int i = b - 1; i > 0; --i) {
      const auto swap_with = static_cast<int>(stream.UniformInt(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(swap_with)]);
    }
  }
  return perms;
}

MaskAssignment DrawPoolMasks(const MaskPool& pool, int b, RngStream& stream) {
  MaskAssignment out;
  out.masks.resize(static_cast<std::size_t>(b));
  out.indices.assign(static_cast<std::size_t>(b), -1);
  if (pool.is_identity()) return out;
  for (int i = 0; i < b; ++i) {
    const auto idx = static_cast<int>(stream.UniformInt(static_cast<std::uint64_t>(pool.size())));
    out.indices[static_cast<std::size_t>(i)] = idx;
    out.masks[static_cast<std::size_t>(i)] = pool.masks[static_cast<std::size_t>(idx)].signs;
  }
  return out;
}

MaskAssignment MasksFromIndices(const MaskPool& pool, std::span<const int> indices) {
  MaskAssignment out;
  out.masks.resize(indices.size());
  out.indices.assign(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int idx = indices[i];
    if (idx < 0) continue;
    if (idx >= pool.size()) throw ConfigError("mask index out of range for pool");
    out.masks[i] = pool.masks[static_cast<std::size_t>(idx)].signs;
  }
  return out;
}

MaskAssignment DrawFreshMasks(int d, int b, RngStream& stream) {
  MaskAssignment out;
  out.indices.assign(static_cast<std::size_t>(b), -1);
  out.masks.reserve(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) {
    DenseVec m(d);
    for (int j = 0; j < d; ++j) m[j] = stream.Rademacher();
    out.masks.push_back(std::move(m));
  }
  return out;
}

HideResult HideBatchIntra(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          int k, const MaskAssignment& masks, RngStream& stream) {
  CheckBatch(reps, labels, k, masks);
  const int b = static_cast<int>(reps.size());
  RngStream lambda_stream = stream.Child({"lambda"});
  RngStream perm_stream = stream.Child({"perm"});
  const DenseMat lambda = SampleLambda(b, k, lambda_stream);
  const auto perms = GenPermutations(b, k, perm_stream);

  HideResult result;
  result.key.masks = masks.masks;
  result.key.mask_index = masks.indices;
  result.key.slots.resize(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) {
    auto& slots = result.key.slots[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j) {
      slots.push_back({SlotSource::kPrivate,
                       perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                       lambda(i, j)});
    }
  }
  result.batch = Assemble(reps, labels, {}, result.key);
  return result;
}

HideResult HideBatchIntra(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          const MaskPool& pool, int k, RngStream& stream) {
  RngStream mask_stream = stream.Child({"mask"});
  const MaskAssignment masks = DrawPoolMasks(pool, static_cast<int>(reps.size()), mask_stream);
  return HideBatchIntra(reps, labels, k, masks, stream);
}

HideResult HideBatchInter(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          std::span<const DenseVec> public_reps, int k,
                          const MaskAssignment& masks, RngStream& stream) {
  CheckBatch(reps, labels, k, masks);
  if (public_reps.empty()) throw ConfigError("texthide inter: empty public corpus");
  for (const DenseVec& r : public_reps) {
    if (r.size() != reps[0].size()) {
      throw ConfigError("texthide inter: public representation dimension mismatch");
    }
  }
  const int b = static_cast<int>(reps.size());
  const int num_private = (k + 1) / 2;
  RngStream lambda_stream = stream.Child({"lambda"});
  RngStream perm_stream = stream.Child({"perm"});
  RngStream public_stream = stream.Child({"public"});
  const DenseMat lambda = SampleLambda(b, k, lambda_stream);
  const auto perms = GenPermutations(b, num_private, perm_stream);

  HideResult result;
  result.key.masks = masks.masks;
  result.key.mask_index = masks.indices;
  result.key.slots.resize(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) {
    auto& slots = result.key.slots[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j) {
      if (j < num_private) {
        slots.push_back({SlotSource::kPrivate,
                         perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                         lambda(i, j)});
      } else {
        const auto idx = static_cast<int>(
            public_stream.UniformInt(static_cast<std::uint64_t>(public_reps.size())));
        slots.push_back({SlotSource::kPublic, idx, lambda(i, j)});
      }
    }
  }
  result.batch = Assemble(reps, labels, public_reps, result.key);
  return result;
}

HideResult HideBatchInter(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          std::span<const DenseVec> public_reps, const MaskPool& pool, int k,
                          RngStream& stream) {
  RngStream mask_stream = stream.Child({"mask"});
  const MaskAssignment masks = DrawPoolMasks(pool, static_cast<int>(reps.size()), mask_stream);
  return HideBatchInter(reps, labels, public_reps, k, masks, stream);
}

std::vector<int> AssignEpochMasks(const MaskPool& pool, std::span<const std::int64_t> example_ids,
                                  std::int64_t epoch, const RngStream& stream) {
  std::vector<int> out(example_ids.size(), -1);
  if (pool.is_identity()) return out;
  for (std::size_t i = 0; i < example_ids.size(); ++i) {
    RngStream draw = stream.Child({"epoch", epoch, "example", example_ids[i]});
    out[i] = static_cast<int>(draw.UniformInt(static_cast<std::uint64_t>(pool.size())));
  }
  return out;
}

void ApplyMask(const DenseVec& mask, DenseVec& rep) {
  if (mask.size() == 0) return;
  if (mask.size() != rep.size()) throw ConfigError("apply_mask: dimension mismatch");
  rep.array() *= mask.array();
}

void WriteMaskPool(const MaskPool& pool, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write mask pool: " + path.string());
  const auto put_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  out.write("THMP", 4);
  put_u32(static_cast<std::uint32_t>(pool.size()));
  put_u32(static_cast<std::uint32_t>(pool.dim));
  const std::size_t bits = static_cast<std::size_t>(pool.size()) * static_cast<std::size_t>(pool.dim);
  std::vector<std::uint8_t> packed((bits + 7) / 8, 0);
  std::size_t bit = 0;
  for (const Mask& mask : pool.masks) {
    for (int j = 0; j < pool.dim; ++j, ++bit) {
      if (mask.signs[j] < 0.0) packed[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
  }
  out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!out) throw ConfigError("write failed: " + path.string());
}

MaskPool ReadMaskPool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open mask pool: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "THMP") throw ParseError("mask pool: bad magic");
  const auto get_u32 = [&] {
    std::uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw ParseError("mask pool: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };
  const std::uint32_t m = get_u32();
  const std::uint32_t d = get_u32();
  const std::size_t bits = static_cast<std::size_t>(m) * d;
  std::vector<std::uint8_t> packed((bits + 7) / 8);
  in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!in) throw ParseError("mask pool: truncated sign bits");
  MaskPool pool;
  pool.dim = static_cast<int>(d);
  std::size_t bit = 0;
  for (std::uint32_t i = 0; i < m; ++i) {
    Mask mask{DenseVec(static_cast<Eigen::Index>(d))};
    for (std::uint32_t j = 0; j < d; ++j, ++bit) {
      mask.signs[j] = (packed[bit / 8] >> (bit % 8)) & 1u ? -1.0 : 1.0;
    }
    pool.masks.push_back(std::move(mask));
  }
  return pool;
}

}  // namespace hidesim
