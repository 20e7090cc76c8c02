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
#ifndef HIDESIM_TEXTHIDE_H_
#define HIDESIM_TEXTHIDE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hidesim/dense.h"
#include "hidesim/rng.h"

namespace hidesim {

// Probability vector over classes.
using SoftLabel = DenseVec;

// A sign-flip mask: every coordinate exactly +1.0 or -1.0.
struct Mask {
  DenseVec signs;
  int dim() const { return static_cast<int>(signs.size()); }
};

// A client's pre-generated masks. An empty pool is the identity scheme.
struct MaskPool {
  std::vector<Mask> masks;
  int dim = 0;
  std::string owner;

  int size() const { return static_cast<int>(masks.size()); }
  bool is_identity() const { return masks.empty(); }
};

// m i.i.d. uniform sign vectors of length d.
MaskPool GenMaskPool(int m, int d, RngStream& stream, std::string owner = {});

// b x k matrix; row i is |z| / sum|z| for z ~ N(0, I_k).
DenseMat SampleLambda(int b, int k, RngStream& stream);

// k permutations of [0, b); the first is the identity.
std::vector<std::vector<int>> GenPermutations(int b, int k, RngStream& stream);

enum class SlotSource : std::uint8_t { kPrivate, kPublic };

struct MixSlot {
  SlotSource source = SlotSource::kPrivate;
  // Row of the encoding batch (private) or of the public cache (public).
  int index = 0;
  double weight = 0.0;
};

// What the server is allowed to see.
struct HiddenBatch {
  std::vector<DenseVec> reps;
  std::vector<SoftLabel> labels;
  std::size_t size() const { return reps.size(); }
};

// The per-example one-time keys. Lives only inside the client; there is
// deliberately no serializer for it.
struct HideKey {
  // slots[i][0] is example i itself.
  std::vector<std::vector<MixSlot>> slots;
  // Sign vector applied to example i; an empty vector means no mask.
  std::vector<DenseVec> masks;
  // Pool index of masks[i], or -1 when unmasked or freshly drawn.
  std::vector<int> mask_index;
};

struct HideResult {
  HiddenBatch batch;
  HideKey key;
};

// Per-example mask choice handed to the hide routines.
struct MaskAssignment {
  std::vector<DenseVec> masks;
  std::vector<int> indices;
};

// sigma_i ~ Uniform(pool) for each of b examples (identity when the pool is
// empty).
MaskAssignment DrawPoolMasks(const MaskPool& pool, int b, RngStream& stream);
// Masks from explicit pool indices (-1 entries mean identity).
MaskAssignment MasksFromIndices(const MaskPool& pool, std::span<const int> indices);
// A brand-new sign vector per example (the unbounded-pool mode).
MaskAssignment DrawFreshMasks(int d, int b, RngStream& stream);

// Intra-dataset hiding:
//   e~_i = sigma_i o sum_j lambda_ij e_{pi_j(i)},  y~_i = sum_j lambda_ij y_{pi_j(i)}
// lambda and the permutations come from children of `stream`. Throws
// ConfigError on dimension mismatches or k < 1.
HideResult HideBatchIntra(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          int k, const MaskAssignment& masks, RngStream& stream);
// Algorithm form: masks drawn uniformly from the pool.
HideResult HideBatchIntra(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          const MaskPool& pool, int k, RngStream& stream);

// Inter-dataset hiding: slots [0, ceil(k/2)) are private (slot 0 = the
// example), the rest are drawn with replacement from `public_reps`. Labels
// mix only the private slots, renormalized by their total weight.
HideResult HideBatchInter(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          std::span<const DenseVec> public_reps, int k,
                          const MaskAssignment& masks, RngStream& stream);
HideResult HideBatchInter(std::span<const DenseVec> reps, std::span<const SoftLabel> labels,
                          std::span<const DenseVec> public_reps, const MaskPool& pool, int k,
                          RngStream& stream);

// Mask index for each example in the given epoch, keyed by
// (stream path, "epoch", epoch, "example", id). Returns -1 for every example
// when the pool is empty.
std::vector<int> AssignEpochMasks(const MaskPool& pool, std::span<const std::int64_t> example_ids,
                                  std::int64_t epoch, const RngStream& stream);

// Applies a mask in place (no-op for an empty mask).
void ApplyMask(const DenseVec& mask, DenseVec& rep);

// Debug dump: "THMP", u32 m, u32 d, then m*d sign bits packed LSB-first,
// bit set for -1.
void WriteMaskPool(const MaskPool& pool, const std::filesystem::path& path);
MaskPool ReadMaskPool(const std::filesystem::path& path);

}  // namespace hidesim

#endif  // HIDESIM_TEXTHIDE_H_
