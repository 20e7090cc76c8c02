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

#include "hidesim/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "hidesim/errors.h"
#include "hidesim/log.h"
#include "hidesim/parallel.h"
#include "json.hpp"

namespace hidesim {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Dataset SyntheticSplit(const ExperimentConfig& config, const std::string& split, int per_class) {
  if (per_class == 0) return Dataset{.num_classes = config.corpus.synthetic.num_classes};
  SyntheticParams p = config.corpus.synthetic;
  p.per_class = per_class;
  p.seed = config.seed;
  p.split = split;
  return GenSynthetic(p);
}

std::vector<Sentence> Pick(const Dataset& dataset, std::span<const int> rows) {
  std::vector<Sentence> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(dataset.sentences[static_cast<std::size_t>(r)]);
  return out;
}

// Reference corpus for the semantic scorer: public text when there is any.
TfidfSemanticScorer MakeScorer(const Corpora& corpora) {
  const Dataset& reference = corpora.pub.empty() ? corpora.test : corpora.pub;
  return TfidfSemanticScorer(Vocab::Build(reference));
}

// Rebuilds ids as positions so sentences from several splits can share an index.
Dataset Concatenate(const Dataset& a, const Dataset& b) {
  Dataset out{.num_classes = std::max(a.num_classes, b.num_classes)};
  for (const Dataset* d : {&a, &b}) {
    for (Sentence s : d->sentences) {
      s.id = static_cast<std::int64_t>(out.sentences.size());
      out.sentences.push_back(std::move(s));
    }
  }
  return out;
}

// Answers each hidden query with `answer(i)` and scores it against `truth[i]`.
template <typename AnswerFn>
std::vector<QueryRecord> ScoreQueries(std::span<const Sentence> truth, const Dataset& index_ds,
                                      const Vocab& index_vocab, const SemanticScorer& scorer,
                                      int workers, AnswerFn&& answer) {
  std::vector<QueryRecord> records(truth.size());
  ParallelFor(truth.size(), workers, [&](std::size_t i) {
    QueryRecord& r = records[i];
    r.query = static_cast<int>(i);
    r.truth_id = truth[i].id;
    r.truth_text = truth[i].raw_text;
    try {
      const RssHit hit = answer(i);
      const Sentence& found = index_ds.sentences[hit.row];
      r.answer_id = found.id;
      r.answer_text = found.raw_text;
      r.similarity = hit.similarity;
      r.metrics = ScorePair(truth[i], found, index_vocab, scorer);
    } catch (const NumericError& e) {
      r.error = e.what();
    }
  });
  return records;
}

MetricsSummary Summarize(const std::vector<QueryRecord>& records) {
  std::vector<MetricsRow> rows;
  rows.reserve(records.size());
  for (const QueryRecord& r : records) rows.push_back(r.metrics);
  return Aggregate(rows);
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9e", v);
  return buf;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

// Writes a report file and its <name>.meta.json sidecar.
void WriteReport(const fs::path& path, const std::string& text, const ReportContext& ctx,
                 const ordered_json& extra = ordered_json::object()) {
  WriteText(path, text);
  ordered_json meta;
  meta["file"] = path.filename().string();
  meta["config_hash"] = ctx.config_hash;
  meta["seed"] = ctx.seed;
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  WriteText(fs::path(path.string() + ".meta.json"), meta.dump(2) + "\n");
}

ordered_json Stamp(const ReportContext& ctx) {
  ordered_json j;
  j["config_hash"] = ctx.config_hash;
  j["seed"] = ctx.seed;
  return j;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Corpora LoadCorpora(const ExperimentConfig& config) {
  const CorpusConfig& cc = config.corpus;
  Corpora c;
  c.train = cc.train_path ? LoadTsv(*cc.train_path)
                          : SyntheticSplit(config, "train", cc.synthetic.per_class);
  c.test = cc.test_path ? LoadTsv(*cc.test_path) : SyntheticSplit(config, "test", cc.test_per_class);
  c.pub = cc.public_path ? LoadTsv(*cc.public_path, DatasetRole::kPublic)
                         : SyntheticSplit(config, "public", cc.public_per_class);
  c.pub.role = DatasetRole::kPublic;
  for (Sentence& s : c.pub.sentences) s.label.reset();
  if (c.train.empty()) throw ConfigError("training corpus is empty");
  if (c.train.num_classes != config.model.num_classes) {
    throw ConfigError("corpus has " + std::to_string(c.train.num_classes) +
                      " classes but model.num_classes is " +
                      std::to_string(config.model.num_classes));
  }
  c.vocab = Vocab::Build(c.train, /*reserve_unknown=*/true);
  c.train_encoded = EncodeDataset(c.train, c.vocab);
  c.test_encoded = EncodeDataset(c.test, c.vocab);
  if (!c.pub.empty()) c.public_tokens = EncodeDataset(c.pub, c.vocab).tokens;
  return c;
}


Dataset DedupByEncoderInput(const Dataset& dataset, const Vocab& vocab) {
  Dataset out{.num_classes = dataset.num_classes, .role = dataset.role};
  std::set<std::vector<std::pair<int, int>>> seen;
  for (const Sentence& s : dataset.sentences) {
    std::map<int, int> counts;
    for (const auto& t : s.tokens) {
      const int index = vocab.IndexOrUnknown(t);
      if (index >= 0) ++counts[index];
    }
    int g = 0;
    for (const auto& [token, n] : counts) g = std::gcd(g, n);
    std::vector<std::pair<int, int>> key;
    for (const auto& [token, n] : counts) key.emplace_back(token, n / std::max(g, 1));
    if (seen.insert(std::move(key)).second) out.sentences.push_back(s);
  }
  return out;
}

std::string SchemeLabel(const TextHideParams& hide) {
  const std::string tag = hide.SchemeTag();
  if (tag == "baseline") return tag;
  const std::string m = hide.fresh_masks ? "inf" : std::to_string(hide.m);
  return tag + "[m=" + m + " k=" + std::to_string(hide.k) + "]";
}

TrainOutcome TrainModel(const ExperimentConfig& config, const Corpora& corpora,
                        const TrainOptions& options) {
  const TrainSetup setup = MakeTrainSetup(config, corpora.vocab.size());
  TrainOutcome out{.setup = setup,
                   .result = RunTraining(setup, corpora.train_encoded, corpora.test_encoded,
                                         corpora.public_tokens, options)};
  if (!corpora.test_encoded.tokens.empty()) {
    out.accuracy = EvaluateTrained(out.setup, out.result, corpora.test_encoded);
  }
  return out;
}

std::vector<DenseVec> HideSentences(const TextHideParams& hide, int batch_size,
                                    const Params& params, std::span<const TokenIds> tokens,
                                    std::span<const int> labels,
                                    std::span<const TokenIds> public_tokens, RngStream& stream) {
  if (tokens.size() != labels.size()) throw ConfigError("hide: tokens and labels disagree");
  std::vector<DenseVec> reps;
  reps.reserve(tokens.size());
  for (const TokenIds& t : tokens) reps.push_back(Encode(params, t));
  if (!hide.enabled) return reps;

  const int d = params.dims().rep_dim;
  const int classes = params.dims().num_classes;
  RngStream pool_stream = stream.Child({"pool"});
  const MaskPool pool =
      (!hide.fresh_masks && hide.m > 0) ? GenMaskPool(hide.m, d, pool_stream, "attacker")
                                        : MaskPool{};
  std::vector<DenseVec> public_reps;
  if (hide.variant == HideVariant::kInter) {
    if (public_tokens.empty()) throw ConfigError("texthide inter requires a public corpus");
    for (const TokenIds& t : public_tokens) public_reps.push_back(Encode(params, t));
  }

  std::vector<DenseVec> hidden;
  hidden.reserve(reps.size());
  const std::size_t b = static_cast<std::size_t>(std::max(1, batch_size));
  for (std::size_t start = 0, batch = 0; start < reps.size(); start += b, ++batch) {
    const std::size_t n = std::min(b, reps.size() - start);
    std::vector<SoftLabel> soft;
    for (std::size_t i = 0; i < n; ++i) soft.push_back(OneHot(labels[start + i], classes));
    const std::span<const DenseVec> batch_reps(reps.data() + start, n);
    RngStream bs = stream.Child({"batch", static_cast<std::int64_t>(batch)});
    RngStream mask_stream = bs.Child({"mask"});
    RngStream hide_stream = bs.Child({"hide"});
    const MaskAssignment masks =
        hide.fresh_masks ? DrawFreshMasks(d, static_cast<int>(n), mask_stream)
                         : DrawPoolMasks(pool, static_cast<int>(n), mask_stream);
    HideResult r = hide.variant == HideVariant::kInter
                       ? HideBatchInter(batch_reps, soft, public_reps, hide.k, masks, hide_stream)
                       : HideBatchIntra(batch_reps, soft, hide.k, masks, hide_stream);
    for (DenseVec& v : r.batch.reps) hidden.push_back(std::move(v));
  }
  return hidden;
}

SearchReport RunRssExperiment(const ExperimentConfig& config, const Corpora& corpora,
                              const Params& params, int workers) {
  const Dataset index_ds = DedupByEncoderInput(Dedup(corpora.train), corpora.vocab);
  const EncodedDataset enc = EncodeDataset(index_ds, corpora.vocab);
  const RssIndex index = RssBuildIndex(enc.ids, enc.tokens, params);
  const Vocab index_vocab = Vocab::Build(index_ds);
  const TfidfSemanticScorer scorer = MakeScorer(corpora);

  RngStream root(config.seed, {"rss"});
  RngStream query_stream = root.Child({"queries"});
  std::vector<int> rows = Permutation(static_cast<int>(index.size()), query_stream);
  rows.resize(std::min<std::size_t>(rows.size(), static_cast<std::size_t>(config.rss.queries)));

  std::vector<TokenIds> tokens;
  std::vector<int> labels;
  for (int r : rows) {
    tokens.push_back(enc.tokens[static_cast<std::size_t>(r)]);
    labels.push_back(enc.labels[static_cast<std::size_t>(r)]);
  }
  RngStream hide_stream = root.Child({"hide"});
  const std::vector<DenseVec> hidden =
      HideSentences(config.texthide, config.federated.batch_size, params, tokens, labels,
                    corpora.public_tokens, hide_stream);

  const std::vector<Sentence> truth = Pick(index_ds, rows);
  SearchReport report{.scheme = SchemeLabel(config.texthide), .semantic_scorer = scorer.Name(),
                      .index_size = index.size()};
  report.queries = ScoreQueries(truth, index_ds, index_vocab, scorer, workers,
                                [&](std::size_t i) { return RssQuery(index, hidden[i]); });
  report.attack = Summarize(report.queries);
  RngStream rand_stream = root.Child({"rand"});
  report.random = RandomBaseline(truth, index_ds.sentences, index_vocab, scorer, rand_stream);
  return report;
}

SearchReport RunReconExperiment(const ExperimentConfig& config, const Corpora& corpora,
                                const Params& params, int workers) {
  if (corpora.test.empty()) throw ConfigError("reprecon needs a non-empty test split");
  RngStream root(config.seed, {"reprecon"});
  const EncodedDataset& train = corpora.train_encoded;

  std::vector<DenseVec> raw_one;
  for (const TokenIds& t : train.tokens) raw_one.push_back(Encode(params, t));
  std::vector<DenseVec> inputs;
  std::vector<DenseVec> targets;
  for (int p = 0; p < config.reprecon.pairs_per_sentence; ++p) {
    RngStream pair_stream = root.Child({"pairs", p});
    std::vector<DenseVec> hidden =
        HideSentences(config.texthide, config.federated.batch_size, params, train.tokens,
                      train.labels, corpora.public_tokens, pair_stream);
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      inputs.push_back(std::move(hidden[i]));
      targets.push_back(raw_one[i]);
    }
  }
  ReconConfig net_cfg = config.reprecon.net;
  net_cfg.seed = config.seed;
  ReconResult trained = ReconTrain(inputs, targets, net_cfg);

  const Dataset index_ds =
      DedupByEncoderInput(Dedup(Concatenate(corpora.train, corpora.test)), corpora.vocab);
  const EncodedDataset index_enc = EncodeDataset(index_ds, corpora.vocab);
  const RssIndex index = RssBuildIndex(index_enc.ids, index_enc.tokens, params);
  const Vocab index_vocab = Vocab::Build(index_ds);
  const TfidfSemanticScorer scorer = MakeScorer(corpora);

  RngStream query_stream = root.Child({"queries"});
  std::vector<int> rows = Permutation(static_cast<int>(corpora.test.size()), query_stream);
  rows.resize(std::min<std::size_t>(rows.size(), static_cast<std::size_t>(config.reprecon.queries)));
  std::vector<TokenIds> tokens;
  std::vector<int> labels;
  for (int r : rows) {
    tokens.push_back(corpora.test_encoded.tokens[static_cast<std::size_t>(r)]);
    labels.push_back(corpora.test_encoded.labels[static_cast<std::size_t>(r)]);
  }
  RngStream hide_stream = root.Child({"hide"});
  const std::vector<DenseVec> hidden =
      HideSentences(config.texthide, config.federated.batch_size, params, tokens, labels,
                    corpora.public_tokens, hide_stream);

  const std::vector<Sentence> truth = Pick(corpora.test, rows);
  SearchReport report{.scheme = SchemeLabel(config.texthide), .semantic_scorer = scorer.Name(),
                      .index_size = index.size(), .epoch_losses = trained.epoch_losses,
                      .final_train_loss = trained.final_loss};
  report.queries = ScoreQueries(truth, index_ds, index_vocab, scorer, workers, [&](std::size_t i) {
    return ReconAttack(trained.net, hidden[i], index);
  });
  report.attack = Summarize(report.queries);
  RngStream rand_stream = root.Child({"rand"});
  report.random = RandomBaseline(truth, index_ds.sentences, index_vocab, scorer, rand_stream);
  return report;
}

SubsetSumReport RunSubsetSumExperiment(const SubsetSumConfig& config, std::uint64_t seed,
                                       int workers) {
  if (config.k < 1 || config.n < config.k || config.dim < 1 || config.instances < 1) {
    throw ConfigError("subset-sum needs 1 <= k <= n, dim >= 1 and instances >= 1");
  }
  SubsetSumReport report{.config = config, .expected_candidates = Binomial(config.n, config.k)};
  report.instances.resize(static_cast<std::size_t>(config.instances));
  ParallelFor(report.instances.size(), workers, [&](std::size_t i) {
    RngStream s(seed, {"subset-sum", "n", config.n, "k", config.k, "instance",
                       static_cast<std::int64_t>(i)});
    RngStream vec_stream = s.Child({"vectors"});
    std::vector<DenseVec> vectors(static_cast<std::size_t>(config.n), DenseVec(config.dim));
    for (DenseVec& v : vectors) {
      for (int j = 0; j < config.dim; ++j) v[j] = vec_stream.Normal();
    }
    RngStream pick_stream = s.Child({"secret"});
    std::vector<int> planted = Permutation(config.n, pick_stream);
    planted.resize(static_cast<std::size_t>(config.k));
    std::sort(planted.begin(), planted.end());
    DenseVec target = vectors[static_cast<std::size_t>(planted[0])];
    for (int j = 1; j < config.k; ++j) target += vectors[static_cast<std::size_t>(planted[j])];

    SubsetSumInstance& inst = report.instances[i];
    inst.instance = static_cast<int>(i);
    inst.planted = planted;
    const SubsetSumResult r = SubsetSumRecover(vectors, target, config.k, config.early_exit);
    inst.recovered = r.indices;
    inst.candidates = r.candidates;
    inst.success = r.indices.has_value() && *r.indices == planted;
    if (r.indices) {
      DenseVec sum = DenseVec::Zero(config.dim);
      for (int idx : *r.indices) sum += vectors[static_cast<std::size_t>(idx)];
      inst.max_abs_error = (sum - target).cwiseAbs().maxCoeff();
    }
  });
  const auto hits = std::count_if(report.instances.begin(), report.instances.end(),
                                  [](const SubsetSumInstance& x) { return x.success; });
  report.success_rate = static_cast<double>(hits) / static_cast<double>(config.instances);
  return report;
}

void WriteTrainReports(const fs::path& dir, const ReportContext& ctx, const TrainOutcome& outcome) {
  fs::create_directories(dir);
  WriteTrainingCheckpoint(dir / "model.thmc", outcome.result, ctx.config_hash);

  std::string rounds;
  const int first = outcome.result.logs.empty() ? outcome.result.server.round
                                                : outcome.result.logs.front().round;
  std::ifstream previous(dir / "rounds.jsonl");
  for (std::string line; std::getline(previous, line);) {
    const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_object() && j.value("round", first) < first) rounds += line + "\n";
  }
  for (const RoundLog& log : outcome.result.logs) rounds += RoundLogJson(log, ctx.config_hash) + "\n";
  WriteReport(dir / "rounds.jsonl", rounds, ctx);

  const TextHideParams& h = outcome.setup.hide;
  const FedParams& f = outcome.setup.fed;
  const double final_loss = outcome.result.logs.empty() ? 0.0 : outcome.result.logs.back().loss;
  std::string csv = "scheme,m,k,variant,clients,rounds,accuracy,final_loss\n";
  csv += SchemeLabel(h) + "," + (h.fresh_masks ? std::string("inf") : std::to_string(h.m)) + "," +
         std::to_string(h.k) + "," + (h.variant == HideVariant::kInter ? "inter" : "intra") + "," +
         std::to_string(f.clients) + "," + std::to_string(outcome.result.server.round) + "," +
         Fixed(outcome.accuracy) + "," + Fixed(final_loss) + "\n";
  WriteReport(dir / "train_summary.csv", csv, ctx, {{"scheme_tag", h.SchemeTag()}});
}

void WriteGradMatchReports(const fs::path& dir, const ReportContext& ctx,
                           std::span<const CellResult> cells) {
  std::string trials;
  std::string curves = "cell,trial,iteration,grad_distance,mask_mse,input_mse\n";
  std::string summary = "cell,k,d,masked,trials,success_rate,mean_final_input_mse\n";
  std::set<int> ds;
  std::map<std::string, std::map<int, double>> table;
  std::vector<std::string> row_order;
  for (const CellResult& c : cells) {
    const std::string name = c.cell.Name();
    for (const TrialRecord& t : c.trials) {
      ordered_json j = Stamp(ctx);
      j["cell"] = name;
      j["k"] = c.cell.k;
      j["d"] = c.cell.d;
      j["masked"] = c.cell.masked;
      j["trial"] = t.trial;
      j["success"] = t.success;
      j["final_grad_distance"] = t.final_grad_distance;
      j["final_input_mse"] = t.final_input_mse;
      j["final_mask_mse"] = t.final_mask_mse;
      if (!t.diagnostic.empty()) j["diagnostic"] = t.diagnostic;
      trials += j.dump() + "\n";
      for (const CurvePoint& p : t.curve) {
        curves += name + "," + std::to_string(t.trial) + "," + std::to_string(p.iteration) + "," +
                  Sci(p.grad_distance) + "," + Sci(p.mask_mse) + "," + Sci(p.input_mse) + "\n";
      }
    }
    summary += name + "," + std::to_string(c.cell.k) + "," + std::to_string(c.cell.d) + "," +
               (c.cell.masked ? "1" : "0") + "," + std::to_string(c.trials.size()) + "," +
               Fixed(c.success_rate) + "," + Sci(c.mean_final_input_mse) + "\n";
    const std::string row = !c.cell.masked && c.cell.k == 1
                                ? std::string("baseline")
                                : "k=" + std::to_string(c.cell.k) + (c.cell.masked ? "" : " nomask");
    if (!table.count(row)) row_order.push_back(row);
    table[row][c.cell.d] = c.success_rate;
    ds.insert(c.cell.d);
  }
  std::string grid = "row";
  for (int d : ds) grid += ",d=" + std::to_string(d);
  grid += "\n";
  for (const std::string& row : row_order) {
    grid += row;
    for (int d : ds) {
      const auto it = table[row].find(d);
      grid += "," + (it == table[row].end() ? std::string() : Fixed(it->second));
    }
    grid += "\n";
  }
  fs::create_directories(dir);
  WriteReport(dir / "grad_match_trials.jsonl", trials, ctx);
  WriteReport(dir / "grad_match_cells.csv", summary, ctx);
  WriteReport(dir / "grad_match_table.csv", grid, ctx, {{"cells", "success rate"}});
  WriteReport(dir / "grad_match_curves.csv", curves, ctx);
}

void WriteSearchReports(const fs::path& dir, const std::string& prefix, const ReportContext& ctx,
                        const SearchReport& report) {
  std::string lines;
  std::string examples;
  for (const QueryRecord& q : report.queries) {
    ordered_json j = Stamp(ctx);
    j["scheme"] = report.scheme;
    j["query"] = q.query;
    j["truth_id"] = q.truth_id;
    j["answer_id"] = q.answer_id ? ordered_json(*q.answer_id) : ordered_json(nullptr);
    j["similarity"] = q.similarity;
    j["identity"] = q.metrics.identity;
    j["jc"] = q.metrics.jaccard;
    j["tfidf_sim"] = q.metrics.tfidf_sim;
    j["label"] = q.metrics.label_agree;
    j["semantic_sim"] = q.metrics.semantic_sim;
    if (!q.error.empty()) j["error"] = q.error;
    lines += j.dump() + "\n";
    if (q.query < 10) {
      examples += "query " + std::to_string(q.query) + "\n  truth:  " + q.truth_text +
                  "\n  answer: " + (q.error.empty() ? q.answer_text : "(" + q.error + ")") + "\n";
    }
  }
  std::string csv = MetricsCsvHeader() + "\n";
  csv += MetricsCsvRow(report.scheme, report.attack) + "\n";
  csv += MetricsCsvRow("Rand", report.random) + "\n";
  const ordered_json notes = {
      {"index_size", report.index_size},
      {"semantic_scorer", report.semantic_scorer},
      {"jc", "Jaccard similarity |x n x*| / |x u x*| over token sets"},
      {"semantic_sim", "TF-IDF cosine over a reference corpus; a stand-in, not a sentence encoder"}};
  fs::create_directories(dir);
  WriteReport(dir / (prefix + "_queries.jsonl"), lines, ctx);
  WriteReport(dir / (prefix + "_metrics.csv"), csv, ctx, notes);
  WriteReport(dir / (prefix + "_examples.txt"), examples, ctx);
  if (!report.epoch_losses.empty()) {
    std::string losses = "epoch,loss\n";
    for (std::size_t e = 0; e < report.epoch_losses.size(); ++e) {
      losses += std::to_string(e + 1) + "," + Sci(report.epoch_losses[e]) + "\n";
    }
    WriteReport(dir / (prefix + "_losses.csv"), losses, ctx,
                {{"final_train_loss", report.final_train_loss}});
  }
}

void WriteSubsetSumReports(const fs::path& dir, const ReportContext& ctx,
                           const SubsetSumReport& report) {
  std::string lines;
  std::uint64_t min_c = UINT64_MAX;
  std::uint64_t max_c = 0;
  for (const SubsetSumInstance& inst : report.instances) {
    ordered_json j = Stamp(ctx);
    j["n"] = report.config.n;
    j["k"] = report.config.k;
    j["instance"] = inst.instance;
    j["planted"] = inst.planted;
    j["recovered"] = inst.recovered ? ordered_json(*inst.recovered) : ordered_json(nullptr);
    j["success"] = inst.success;
    j["candidates"] = inst.candidates;
    j["max_abs_error"] = inst.max_abs_error;
    lines += j.dump() + "\n";
    min_c = std::min(min_c, inst.candidates);
    max_c = std::max(max_c, inst.candidates);
  }
  const SubsetSumConfig& c = report.config;
  std::string csv = "n,k,dim,instances,early_exit,success_rate,binomial,min_candidates,max_candidates\n";
  csv += std::to_string(c.n) + "," + std::to_string(c.k) + "," + std::to_string(c.dim) + "," +
         std::to_string(c.instances) + "," + (c.early_exit ? "1" : "0") + "," +
         Fixed(report.success_rate) + "," + std::to_string(report.expected_candidates) + "," +
         std::to_string(min_c) + "," + std::to_string(max_c) + "\n";
  fs::create_directories(dir);
  WriteReport(dir / "subset_sum.jsonl", lines, ctx);
  WriteReport(dir / "subset_sum.csv", csv, ctx);
}

void WriteCorpusStats(const fs::path& path, const ReportContext& ctx, const Dataset& dataset,
                      const Vocab& vocab) {
  std::map<int, int> counts;
  for (const Sentence& s : dataset.sentences) ++counts[s.label.value_or(-1)];
  ordered_json j = Stamp(ctx);
  j["sentences"] = dataset.size();
  j["num_classes"] = dataset.num_classes;
  ordered_json per_class = ordered_json::object();
  for (const auto& [label, n] : counts) per_class[std::to_string(label)] = n;
  j["class_counts"] = per_class;
  j["vocab_size"] = vocab.size();
  WriteText(path, j.dump(2) + "\n");
}

MergeResult MergeReports(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("report: no such directory: " + dir.string());
  MergeResult result;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    if (entry.path().filename() == "summary.csv") continue;
    result.inputs.push_back(entry.path());
  }
  if (result.inputs.empty()) {
    throw ConfigError("report: no CSV outputs under " + dir.string() + "; run train or attack first");
  }
  std::sort(result.inputs.begin(), result.inputs.end());

  std::string out = "file,config_hash,seed,row,column,value\n";
  std::map<std::string, std::vector<std::string>> files_by_hash;
  for (const fs::path& path : result.inputs) {
    const std::string rel = fs::relative(path, dir).generic_string();
    std::string hash = "";
    std::string seed = "";
    std::ifstream meta_in(path.string() + ".meta.json");
    if (meta_in) {
      const auto meta = nlohmann::json::parse(meta_in, nullptr, /*allow_exceptions=*/false);
      if (meta.is_object() && meta.contains("config_hash")) {
        hash = meta["config_hash"].get<std::string>();
        seed = std::to_string(meta.value("seed", std::uint64_t{0}));
      }
    }
    if (hash.empty()) {
      result.warnings.push_back("no config hash for " + rel);
    } else {
      files_by_hash[hash].push_back(rel);
    }
    std::ifstream in(path);
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> cells = SplitCsv(line);
      if (header.empty()) {
        header = cells;
        continue;
      }
      for (std::size_t c = 1; c < cells.size() && c < header.size(); ++c) {
        out += rel + "," + hash + "," + seed + "," + cells[0] + "," + header[c] + "," + cells[c] +
               "\n";
      }
    }
  }
  if (files_by_hash.size() > 1) {
    for (const auto& [hash, files] : files_by_hash) {
      std::string joined;
      for (const std::string& f : files) joined += (joined.empty() ? "" : " ") + f;
      result.warnings.push_back("config hash mismatch: " + hash + " used by " + joined);
    }
  }
  WriteText(dir / "summary.csv", out);
  const fs::path warnings_path = dir / "summary_warnings.txt";
  if (result.warnings.empty()) {
    fs::remove(warnings_path);
  } else {
    std::string text;
    for (const std::string& w : result.warnings) {
      text += w + "\n";
      Log(LogLevel::kWarn, w);
    }
    WriteText(warnings_path, text);
  }
  return result;
}

}  // namespace hidesim
