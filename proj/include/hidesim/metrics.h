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

#ifndef HIDESIM_METRICS_H_
#define HIDESIM_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hidesim/corpus.h"
#include "hidesim/rng.h"

namespace hidesim {

// Similarity between a query's true sentence x and an attack's answer x*.
struct MetricsRow {
  double identity = 0.0;
  double jaccard = 0.0;
  double tfidf_sim = 0.0;
  double label_agree = 0.0;
  // Stand-in for a learned sentence-similarity score; see SemanticScorer.
  double semantic_sim = 0.0;
};

// 1 iff the token sequences are equal.
double Identity(const Sentence& x, const Sentence& x_star);
// |set(x) & set(x*)| / |set(x) | set(x*)|; 1 when both are empty.
double Jaccard(const Sentence& x, const Sentence& x_star);
// Cosine of the TF-IDF vectors under `vocab` (0 when either has no known term).
double TfidfSim(const Sentence& x, const Sentence& x_star, const Vocab& vocab);
// 1 iff labels are equal. Throws ConfigError when either is unlabeled.
double LabelAgree(const Sentence& x, const Sentence& x_star);

class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  virtual double Score(const Sentence& x, const Sentence& x_star) const = 0;
  virtual std::string Name() const = 0;
};

// TF-IDF cosine under a vocabulary built from a held-out reference corpus.
// A crude substitute for a pretrained sentence encoder.
class TfidfSemanticScorer : public SemanticScorer {
 public:
  explicit TfidfSemanticScorer(Vocab reference) : reference_(std::move(reference)) {}
  double Score(const Sentence& x, const Sentence& x_star) const override;
  std::string Name() const override { return "tfidf-reference"; }

 private:
  Vocab reference_;
};

MetricsRow ScorePair(const Sentence& x, const Sentence& x_star, const Vocab& index_vocab,
                     const SemanticScorer& semantic);

struct MetricsSummary {
  MetricsRow mean;
  std::size_t count = 0;
};

// Arithmetic mean per metric. Throws ConfigError on no rows.
MetricsSummary Aggregate(std::span<const MetricsRow> rows);

// Answers every query with a uniformly random index entry.
MetricsSummary RandomBaseline(std::span<const Sentence> queries, std::span<const Sentence> index,
                              const Vocab& index_vocab, const SemanticScorer& semantic,
                              RngStream& stream);

// scheme,identity,jc,tfidf_sim,label,semantic_sim,n_queries
std::string MetricsCsvHeader();
std::string MetricsCsvRow(const std::string& scheme, const MetricsSummary& summary);

}  // namespace hidesim

#endif  // HIDESIM_METRICS_H_
