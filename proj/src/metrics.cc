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

#include "hidesim/metrics.h"

#include <cstdio>
#include <set>

#include "hidesim/errors.h"

namespace hidesim {

double Identity(const Sentence& x, const Sentence& x_star) {
  return x.tokens == x_star.tokens ? 1.0 : 0.0;
}

double Jaccard(const Sentence& x, const Sentence& x_star) {
  const std::set<std::string> a(x.tokens.begin(), x.tokens.end());
  const std::set<std::string> b(x_star.tokens.begin(), x_star.tokens.end());
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : a) common += b.count(t);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double TfidfSim(const Sentence& x, const Sentence& x_star, const Vocab& vocab) {
  return SparseCosine(TfidfVector(x.tokens, vocab), TfidfVector(x_star.tokens, vocab));
}

double LabelAgree(const Sentence& x, const Sentence& x_star) {
  if (!x.label || !x_star.label) throw ConfigError("label agreement needs labeled sentences");
  return *x.label == *x_star.label ? 1.0 : 0.0;
}

double TfidfSemanticScorer::Score(const Sentence& x, const Sentence& x_star) const {
  return TfidfSim(x, x_star, reference_);
}

MetricsRow ScorePair(const Sentence& x, const Sentence& x_star, const Vocab& index_vocab,
                     const SemanticScorer& semantic) {
  return {.identity = Identity(x, x_star),
          .jaccard = Jaccard(x, x_star),
          .tfidf_sim = TfidfSim(x, x_star, index_vocab),
          .label_agree = LabelAgree(x, x_star),
          .semantic_sim = semantic.Score(x, x_star)};
}

MetricsSummary Aggregate(std::span<const MetricsRow> rows) {
  if (rows.empty()) throw ConfigError("cannot aggregate zero metric rows");
  MetricsSummary out;
  for (const MetricsRow& r : rows) {
    out.mean.identity += r.identity;
    out.mean.jaccard += r.jaccard;
    out.mean.tfidf_sim += r.tfidf_sim;
    out.mean.label_agree += r.label_agree;
    out.mean.semantic_sim += r.semantic_sim;
  }
  const double n = static_cast<double>(rows.size());
  out.mean.identity /= n;
  out.mean.jaccard /= n;
  out.mean.tfidf_sim /= n;
  out.mean.label_agree /= n;
  out.mean.semantic_sim /= n;
  out.count = rows.size();
  return out;
}

MetricsSummary RandomBaseline(std::span<const Sentence> queries, std::span<const Sentence> index,
                              const Vocab& index_vocab, const SemanticScorer& semantic,
                              RngStream& stream) {
  if (index.empty()) throw ConfigError("random baseline needs a nonempty index");
  std::vector<MetricsRow> rows;
  rows.reserve(queries.size());
  for (const Sentence& q : queries) {
    const Sentence& pick = index[stream.UniformInt(index.size())];
    rows.push_back(ScorePair(q, pick, index_vocab, semantic));
  }
  return Aggregate(rows);
}

std::string MetricsCsvHeader() { return "scheme,identity,jc,tfidf_sim,label,semantic_sim,n_queries"; }

std::string MetricsCsvRow(const std::string& scheme, const MetricsSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%zu", scheme.c_str(),
                s.mean.identity, s.mean.jaccard, s.mean.tfidf_sim, s.mean.label_agree,
                s.mean.semantic_sim, s.count);
  return buf;
}

}  // namespace hidesim
