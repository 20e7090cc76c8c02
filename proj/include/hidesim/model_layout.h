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
#ifndef HIDESIM_MODEL_LAYOUT_H_
#define HIDESIM_MODEL_LAYOUT_H_

#include <cstddef>
#include <vector>

namespace hidesim {

struct ModelDims {
  int vocab_size = 0;
  int embed_dim = 32;
  int rep_dim = 64;
  std::vector<int> hidden = {64, 64, 64};
  int num_classes = 2;

  bool operator==(const ModelDims&) const = default;
};

// Offsets of every parameter block inside the flat parameter vector. The
// encoder (embedding, projection) comes first, then the classifier layers.
struct ParamLayout {
  explicit ParamLayout(const ModelDims& dims);

  int vocab_size;
  int embed_dim;
  int rep_dim;
  std::size_t embedding = 0;
  std::size_t projection_weight = 0;
  std::size_t projection_bias = 0;
  std::size_t encoder_size = 0;
  // rep_dim, hidden..., num_classes
  std::vector<int> widths;
  std::vector<std::size_t> layer_weight;
  std::vector<std::size_t> layer_bias;
  std::size_t total = 0;
};

}  // namespace hidesim

#endif  // HIDESIM_MODEL_LAYOUT_H_
