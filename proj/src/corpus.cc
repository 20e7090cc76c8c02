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
#include "hidesim/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hidesim/errors.h"
#include "hidesim/rng.h"

namespace hidesim {
namespace {

bool IsUnicodeSpace(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes one UTF-8 sequence at text[pos]; invalid bytes decode as themselves
// with length 1 so that arbitrary input never throws.
char32_t DecodeUtf8(std::string_view text, std::size_t pos, std::size_t& length) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  std::size_t need = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    length = 1;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    need = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    need = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    need = 3;
    cp = lead & 0x07;
  } else {
    length = 1;
    return lead;
  }
  if (pos + need >= text.size()) {
    length = 1;
    return lead;
  }
  for (std::size_t i = 1; i <= need; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) {
      length = 1;
      return lead;
    }
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  length = need + 1;
  return cp;
}

bool IsAsciiPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

void EmitToken(std::string_view raw, std::vector<std::string>& out) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && IsAsciiPunct(raw[begin])) ++begin;
  while (end > begin && IsAsciiPunct(raw[end - 1])) --end;
  if (begin == end) return;
  std::string token(raw.substr(begin, end - begin));
  for (char& c : token) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  out.push_back(std::move(token));
}

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

constexpr std::array<std::string_view, 16> kSyllables = {
    "ba", "ko", "ri", "su", "te", "mi", "na", "lo",
    "pe", "du", "ga", "zi", "fo", "ve", "hu", "ja"};

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 1;
    const char32_t cp = DecodeUtf8(text, pos, len);
    if (IsUnicodeSpace(cp)) {
      if (pos > start) EmitToken(text.substr(start, pos - start), tokens);
      start = pos + len;
    }
    pos += len;
  }
  if (start < text.size()) EmitToken(text.substr(start), tokens);
  return tokens;
}

Dataset LoadTsv(const std::filesystem::path& path, DatasetRole role) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file: " + path.string());
  Dataset dataset;
  dataset.role = role;
  std::string line;
  int line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected label<TAB>text");
    }
    const std::string_view label_text(line.data(), tab);
    int label = 0;
    const auto [ptr, ec] =
        std::from_chars(label_text.data(), label_text.data() + label_text.size(), label);
    if (ec != std::errc() || ptr != label_text.data() + label_text.size() || label < 0) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": label is not a non-negative integer: '" + std::string(label_text) +
                       "'");
    }
    Sentence s;
    s.id = static_cast<std::int64_t>(dataset.sentences.size());
    s.raw_text = line.substr(tab + 1);
    s.tokens = Tokenize(s.raw_text);
    if (s.tokens.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": text has no tokens");
    }
    if (role == DatasetRole::kPrivate) s.label = label;
    max_label = std::max(max_label, label);
    dataset.sentences.push_back(std::move(s));
  }
  if (dataset.sentences.empty()) {
    throw ParseError(path.string() + ": empty dataset");
  }
  dataset.num_classes = max_label + 1;
  return dataset;
}

void WriteTsv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write corpus file: " + path.string());
  for (const Sentence& s : dataset.sentences) {
    out << s.label.value_or(0) << '\t' << s.raw_text << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::string SyntheticWord(int index) {
  std::string word;
  int rest = index;
  for (int i = 0; i < 3; ++i) {
    word.insert(0, kSyllables[static_cast<std::size_t>(rest % 16)]);
    rest /= 16;
  }
  if (rest > 0) word += std::to_string(rest);
  return word;
}

Dataset GenSynthetic(const SyntheticParams& p) {
  if (p.num_classes < 2) throw ConfigError("gen_synthetic: need at least 2 classes");
  if (p.per_class < 1) throw ConfigError("gen_synthetic: per_class must be positive");
  if (p.signal_tokens_per_class < 1) {
    throw ConfigError("gen_synthetic: signal_tokens_per_class must be positive");
  }
  if (p.vocab_size <= p.num_classes * p.signal_tokens_per_class) {
    throw ConfigError("gen_synthetic: vocab_size must exceed num_classes * "
                      "signal_tokens_per_class");
  }
  if (p.min_length < 1 || p.max_length < p.min_length) {
    throw ConfigError("gen_synthetic: invalid length range");
  }
  if (!(p.signal_prob > 0.0 && p.signal_prob < 1.0)) {
    throw ConfigError("gen_synthetic: signal_prob must lie in (0, 1)");
  }
  const int num_signal = p.num_classes * p.signal_tokens_per_class;
  const int num_background = p.vocab_size - num_signal;
  RngStream rng(p.seed, {"corpus", p.split});

  Dataset dataset;
  dataset.num_classes = p.num_classes;
  for (int i = 0; i < p.per_class; ++i) {
    for (int c = 0; c < p.num_classes; ++c) {
      const int length =
          p.min_length + static_cast<int>(rng.UniformInt(
                             static_cast<std::uint64_t>(p.max_length - p.min_length + 1)));
      std::vector<int> words(static_cast<std::size_t>(length));
      bool has_signal = false;
      for (int& w : words) {
        if (rng.Uniform() < p.signal_prob) {
          w = c * p.signal_tokens_per_class +
              static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(p.signal_tokens_per_class)));
          has_signal = true;
        } else {
          w = num_signal + static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(num_background)));
        }
      }
      if (!has_signal) {
        const auto slot = rng.UniformInt(static_cast<std::uint64_t>(length));
        words[slot] = c * p.signal_tokens_per_class +
                      static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(p.signal_tokens_per_class)));
      }
      Sentence s;
      s.id = static_cast<std::int64_t>(dataset.sentences.size());
      s.label = c;
      for (int w : words) s.tokens.push_back(SyntheticWord(w));
      s.raw_text = JoinTokens(s.tokens);
      s.raw_text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s.raw_text[0])));
      s.raw_text += '.';
      dataset.sentences.push_back(std::move(s));
    }
  }
  return dataset;
}

Dataset Dedup(const Dataset& dataset) {
  Dataset out;
  out.num_classes = dataset.num_classes;
  out.role = dataset.role;
  std::set<std::vector<std::string>> seen;
  for (const Sentence& s : dataset.sentences) {
    if (seen.insert(s.tokens).second) out.sentences.push_back(s);
  }
  return out;
}

Vocab Vocab::Build(const std::vector<std::vector<std::string>>& documents,
                   bool reserve_unknown) {
  Vocab vocab;
  vocab.has_unknown_ = reserve_unknown;
  if (reserve_unknown) {
    vocab.tokens_.push_back("<unk>");
    vocab.df_.push_back(0);
  }
  for (const auto& doc : documents) {
    std::unordered_set<int> in_doc;
    for (const std::string& t : doc) {
      auto [it, inserted] = vocab.index_.try_emplace(t, vocab.size());
      if (inserted) {
        vocab.tokens_.push_back(t);
        vocab.df_.push_back(0);
      }
      if (in_doc.insert(it->second).second) ++vocab.df_[static_cast<std::size_t>(it->second)];
    }
  }
  vocab.num_documents_ = static_cast<int>(documents.size());
  return vocab;
}

Vocab Vocab::Build(const Dataset& dataset, bool reserve_unknown) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(dataset.size());
  for (const Sentence& s : dataset.sentences) docs.push_back(s.tokens);
  return Build(docs, reserve_unknown);
}

std::optional<int> Vocab::Find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocab::IndexOrUnknown(std::string_view token) const {
  if (auto idx = Find(token)) return *idx;
  return has_unknown_ ? 0 : -1;
}

SparseVec TfidfVector(const std::vector<std::string>& tokens, const Vocab& vocab) {
  std::map<int, int> counts;
  for (const std::string& t : tokens) {
    if (auto idx = vocab.Find(t)) ++counts[*idx];
  }
  SparseVec out;
  out.reserve(counts.size());
  const double n = vocab.num_documents();
  double norm_sq = 0.0;
  for (const auto& [idx, tf] : counts) {
    const double df = vocab.document_frequency(idx);
    const double weight = tf * (std::log((1.0 + n) / (1.0 + df)) + 1.0);
    out.emplace_back(idx, weight);
    norm_sq += weight * weight;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& entry : out) entry.second *= inv;
  }
  return out;
}

double SparseCosine(const SparseVec& a, const SparseVec& b) {
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (const auto& e : a) aa += e.second * e.second;
  for (const auto& e : b) bb += e.second * e.second;
  if (aa == 0.0 || bb == 0.0) return 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return std::clamp(dot / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

}  // namespace hidesim
