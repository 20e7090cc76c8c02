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
#ifndef HIDESIM_CORPUS_H_
#define HIDESIM_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hidesim {

struct Sentence {
  std::int64_t id = 0;
  std::vector<std::string> tokens;
  std::string raw_text;
  // Absent for unlabeled (public) corpora.
  std::optional<int> label;
};

enum class DatasetRole { kPrivate, kPublic };

struct Dataset {
  std::vector<Sentence> sentences;
  int num_classes = 0;
  DatasetRole role = DatasetRole::kPrivate;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
};

// Lowercases ASCII letters, splits on Unicode whitespace, strips leading and
// trailing ASCII punctuation from each token and drops empty tokens.
std::vector<std::string> Tokenize(std::string_view text);

// Reads `label<TAB>text` lines. Ids follow line order. Throws ParseError with
// the 1-based line number on malformed input, and on an empty file.
Dataset LoadTsv(const std::filesystem::path& path, DatasetRole role = DatasetRole::kPrivate);
void WriteTsv(const Dataset& dataset, const std::filesystem::path& path);

struct SyntheticParams {
  int num_classes = 2;
  int per_class = 500;
  int vocab_size = 200;
  int signal_tokens_per_class = 5;
  int min_length = 5;
  int max_length = 12;
  // Per-position probability of drawing a class signal token. Every sentence
  // carries at least one signal token.
  double signal_prob = 0.35;
  std::uint64_t seed = 1;
  // Separates independent draws (train / test / public) under one seed.
  std::string split = "train";
};

// Each class owns a disjoint block of signal tokens; the rest of the
// vocabulary is shared background. Deterministic given params.
Dataset GenSynthetic(const SyntheticParams& params);

// The word the generator emits for vocabulary slot `index`.
std::string SyntheticWord(int index);

// Removes sentences whose token sequence already appeared, keeping the first.
Dataset Dedup(const Dataset& dataset);

// Token index with document frequencies over a document collection.
class Vocab {
 public:
  Vocab() = default;
  // Indices follow first appearance. When `reserve_unknown` is set, index 0
  // is "<unk>" and carries df 0.
  static Vocab Build(const std::vector<std::vector<std::string>>& documents,
                     bool reserve_unknown = false);
  static Vocab Build(const Dataset& dataset, bool reserve_unknown = false);

  std::optional<int> Find(std::string_view token) const;
  // Index of token, or the unknown slot (0) when reserved; -1 otherwise.
  int IndexOrUnknown(std::string_view token) const;

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int index) const { return tokens_.at(index); }
  int document_frequency(int index) const { return df_.at(index); }
  int num_documents() const { return num_documents_; }
  bool has_unknown() const { return has_unknown_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<int> df_;
  std::unordered_map<std::string, int> index_;
  int num_documents_ = 0;
  bool has_unknown_ = false;
};

// Sorted (index, weight) pairs.
using SparseVec = std::vector<std::pair<int, double>>;

// tf(t) * (ln((1 + n) / (1 + df(t))) + 1), L2-normalized. Out-of-vocabulary
// tokens are ignored; a document with none in vocabulary maps to {}.
SparseVec TfidfVector(const std::vector<std::string>& tokens, const Vocab& vocab);

// Cosine of two sparse vectors; 0 when either is empty.
double SparseCosine(const SparseVec& a, const SparseVec& b);

}  // namespace hidesim

#endif  // HIDESIM_CORPUS_H_
