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

// Acceptance harness: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Report files go under argv[1] (default: a temp directory).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hidesim/attacks.h"
#include "hidesim/config.h"
#include "hidesim/experiments.h"
#include "hidesim/fedsim.h"
#include "hidesim/grad_check.h"
#include "hidesim/model.h"
#include "hidesim/texthide.h"

namespace hidesim {
namespace {

namespace fs = std::filesystem;

// Tolerances and budgets.
constexpr int kGradConfigs = 10;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradEps = 1e-6;
constexpr double kGradBudgetSec = 30;
constexpr int kEquivalenceRounds = 50;
constexpr double kSimplexTol = 1e-12;
constexpr double kAlgebraBudgetSec = 10;
constexpr double kBaselineAccuracy = 0.95;
constexpr double kUtilityGap = 0.05;
constexpr int kUtilityRounds = 500;
constexpr double kUtilityBudgetSec = 120;
constexpr double kGradMatchBaselineRate = 0.5;
constexpr double kGradMatchBudgetSec = 600;
constexpr double kRssIdentityMax = 0.01;
constexpr double kLabelGapMax = 0.10;
constexpr int kRssQueries = 1000;
constexpr double kRssBudgetSec = 120;
constexpr double kReconIdentityMin = 0.95;
constexpr double kReconBudgetSec = 300;
constexpr double kSubsetSumBudgetSec = 60;

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string& name, const Verdict& v, double seconds) {
  if (!v.pass) ++failures;
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail
            << " (" << Fmt("%.1f", seconds) << " s)" << std::endl;
}

ReportContext Ctx(const ExperimentConfig& c) { return {ConfigHash(c), c.seed}; }

// ---------------------------------------------------------------------------
// 1. Gradient correctness.

double ReplayLoss(const ModelDims& dims, std::span<const double> theta,
                  const std::vector<TokenIds>& sources, const HiddenBatch& hidden,
                  const HideKey& key, std::span<const DenseVec> public_reps) {
  Params p(dims);
  std::copy(theta.begin(), theta.end(), p.values().begin());
  std::vector<DenseVec> reps;
  for (const auto& ids : sources) reps.push_back(Encode(p, ids));
  double loss = 0.0;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    DenseVec mixed = DenseVec::Zero(dims.rep_dim);
    for (const MixSlot& slot : key.slots[i]) {
      mixed += slot.weight * (slot.source == SlotSource::kPrivate ? reps[slot.index]
                                                                  : public_reps[slot.index]);
    }
    if (key.masks[i].size() > 0) mixed = mixed.cwiseProduct(key.masks[i]);
    loss += SoftCeLoss(Classify(p, mixed), hidden.labels[i]);
  }
  return loss / static_cast<double>(hidden.size());
}

Verdict GradientCorrectness() {
  RngStream root(2024, {"acceptance", "gradients"});
  double worst = 0.0;
  std::string worst_desc;
  constexpr int kValues[] = {1, 2, 4};
  for (int c = 0; c < kGradConfigs; ++c) {
    RngStream s = root.Child({"config", c});
    const int k = kValues[s.UniformInt(3)];
    const int m = s.UniformInt(2) == 0 ? 0 : 4;
    const bool inter = s.UniformInt(2) == 1;
    const ModelDims dims{.vocab_size = 12,
                         .embed_dim = 3 + static_cast<int>(s.UniformInt(4)),
                         .rep_dim = 2 + static_cast<int>(s.UniformInt(15)),
                         .hidden = {4 + static_cast<int>(s.UniformInt(4))},
                         .num_classes = 2 + static_cast<int>(s.UniformInt(2))};
    const Params params = InitParams(dims, s.Child({"init"}));
    const int b = 3 + static_cast<int>(s.UniformInt(3));
    std::vector<TokenIds> sources;
    std::vector<SoftLabel> labels;
    for (int i = 0; i < b; ++i) {
      TokenIds ids;
      const int len = 1 + static_cast<int>(s.UniformInt(4));
      for (int t = 0; t < len; ++t) ids.push_back(static_cast<int>(s.UniformInt(12)));
      sources.push_back(ids);
      labels.push_back(OneHot(static_cast<int>(s.UniformInt(dims.num_classes)), dims.num_classes));
    }
    std::vector<DenseVec> reps;
    for (const auto& ids : sources) reps.push_back(Encode(params, ids));
    RngStream pool_stream = s.Child({"pool"});
    const MaskPool pool = GenMaskPool(m, dims.rep_dim, pool_stream);
    const Params snapshot = InitParams(dims, s.Child({"snapshot"}));
    const std::vector<DenseVec> public_reps = {Encode(snapshot, TokenIds{1, 2}),
                                               Encode(snapshot, TokenIds{7})};
    RngStream hide = s.Child({"hide"});
    const HideResult h = inter ? HideBatchInter(reps, labels, public_reps, pool, k, hide)
                               : HideBatchIntra(reps, labels, pool, k, hide);
    const LossAndGrads lg = BackwardBatch(params, sources, h.batch, h.key);
    const auto fn = [&](std::span<const double> theta) {
      return ReplayLoss(dims, theta, sources, h.batch, h.key, public_reps);
    };
    const std::vector<double> theta(params.values().begin(), params.values().end());
    const GradCheckResult r = GradCheck(fn, theta, lg.grads.values(), kGradEps);
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_desc = "d=" + std::to_string(dims.rep_dim) + " k=" + std::to_string(k) +
                   " m=" + std::to_string(m) + (inter ? " inter" : " intra");
    }
  }
  return {worst <= kGradRelTol, "max rel err " + Fmt("%.2e", worst) + " over " +
                                    std::to_string(kGradConfigs) + " configs (worst " +
                                    worst_desc + "), tol " + Fmt("%.0e", kGradRelTol)};
}

// ---------------------------------------------------------------------------
// 2. Baseline equivalence.

Verdict BaselineEquivalence(const Corpora& corpora) {
  ExperimentConfig base;
  base.federated.clients = 2;
  ExperimentConfig zero_one = base;
  ExperimentConfig bypass = base;
  bypass.texthide.enabled = false;
  const TrainSetup a = MakeTrainSetup(zero_one, corpora.vocab.size());
  const TrainSetup b = MakeTrainSetup(bypass, corpora.vocab.size());

  std::vector<ClientState> ca = MakeClients(a, corpora.train_encoded);
  std::vector<ClientState> cb = MakeClients(b, corpora.train_encoded);
  const Params init = InitParams(a.dims, RngStream(a.seed, {"init"}));
  const auto server = [&](const TrainSetup& s) {
    return ServerState{.params = init,
                       .learning_rate = s.fed.learning_rate,
                       .mode = s.fed.optimizer,
                       .optimizer = AdamState(AdamConfig{.learning_rate = s.fed.learning_rate},
                                              init.values().size())};
  };
  ServerState sa = server(a);
  ServerState sb = server(b);
  int mismatched_rounds = 0;
  for (int t = 0; t < kEquivalenceRounds; ++t) {
    std::vector<Gradients> ga;
    std::vector<Gradients> gb;
    for (std::size_t c = 0; c < ca.size(); ++c) {
      const ClientUpdate ua = RunClientUpdate(ca[c], sa.params, a, t, corpora.public_tokens);
      const ClientUpdate ub = RunClientUpdate(cb[c], sb.params, b, t, corpora.public_tokens);
      if (!(ua.grads == ub.grads) || ua.loss != ub.loss) ++mismatched_rounds;
      ga.push_back(ua.grads);
      gb.push_back(ub.grads);
    }
    ServerRound(sa, ga, static_cast<int>(ca.size()));
    ServerRound(sb, gb, static_cast<int>(cb.size()));
  }
  const TrainResult ra = RunTraining(a, corpora.train_encoded, {}, corpora.public_tokens, {});
  const TrainResult rb = RunTraining(b, corpora.train_encoded, {}, corpora.public_tokens, {});
  const bool same_final = SerializeCheckpoint(ra.server.params) == SerializeCheckpoint(rb.server.params);
  return {mismatched_rounds == 0 && same_final,
          std::to_string(mismatched_rounds) + " client updates differ over " +
              std::to_string(kEquivalenceRounds) + " rounds x 2 clients; final checkpoint (T=" +
              std::to_string(a.fed.rounds) + ") " + (same_final ? "bitwise equal" : "differs")};
}

// ---------------------------------------------------------------------------
// 3. Encryption algebra.

Verdict EncryptionAlgebra() {
  RngStream root(7, {"acceptance", "algebra"});
  int bad_involution = 0;
  for (int i = 0; i < 2000; ++i) {
    RngStream s = root.Child({"involution", i});
    const int d = 1 + static_cast<int>(s.UniformInt(64));
    RngStream ps = s.Child({"pool"});
    const MaskPool pool = GenMaskPool(1, d, ps);
    DenseVec v(d);
    for (int j = 0; j < d; ++j) v[j] = s.Normal() * std::pow(10.0, s.Normal() * 3);
    DenseVec w = v;
    ApplyMask(pool.masks[0].signs, w);
    ApplyMask(pool.masks[0].signs, w);
    if (!(w.array() == v.array()).all()) ++bad_involution;
  }
  double worst_sum = 0.0;
  int negative = 0;
  int bad_first_perm = 0;
  for (int k = 1; k <= 8; ++k) {
    for (int b : {1, 2, 7, 64}) {
      RngStream ls = root.Child({"lambda", k, b});
      const DenseMat lambda = SampleLambda(b, k, ls);
      for (int i = 0; i < b; ++i) {
        worst_sum = std::max(worst_sum, std::abs(lambda.row(i).sum() - 1.0));
        negative += (lambda.row(i).array() < 0.0).count();
      }
      RngStream ps = root.Child({"perm", k, b});
      const auto perms = GenPermutations(b, k, ps);
      for (int i = 0; i < b; ++i) bad_first_perm += perms[0][static_cast<std::size_t>(i)] != i;
    }
  }
  // Inter: labels depend only on the private side.
  int bad_labels = 0;
  for (int trial = 0; trial < 50; ++trial) {
    RngStream s = root.Child({"inter", trial});
    const int d = 6;
    const int b = 5;
    std::vector<DenseVec> reps;
    std::vector<SoftLabel> labels;
    for (int i = 0; i < b; ++i) {
      DenseVec r(d);
      for (int j = 0; j < d; ++j) r[j] = s.Normal();
      reps.push_back(r);
      labels.push_back(OneHot(static_cast<int>(s.UniformInt(3)), 3));
    }
    std::vector<DenseVec> pub_a;
    std::vector<DenseVec> pub_b;
    for (int i = 0; i < 4; ++i) {
      DenseVec r(d);
      for (int j = 0; j < d; ++j) r[j] = s.Normal();
      pub_a.push_back(r);
      pub_b.push_back(-3.0 * r);
    }
    RngStream pool_stream = s.Child({"pool"});
    const MaskPool pool = GenMaskPool(4, d, pool_stream);
    RngStream h1 = s.Child({"hide"});
    RngStream h2 = s.Child({"hide"});
    const HideResult x = HideBatchInter(reps, labels, pub_a, pool, 4, h1);
    const HideResult y = HideBatchInter(reps, labels, pub_b, pool, 4, h2);
    for (int i = 0; i < b; ++i) {
      if (!(x.batch.labels[static_cast<std::size_t>(i)].array() ==
            y.batch.labels[static_cast<std::size_t>(i)].array())
               .all()) {
        ++bad_labels;
      }
    }
  }
  const bool pass = bad_involution == 0 && worst_sum <= kSimplexTol && negative == 0 &&
                    bad_first_perm == 0 && bad_labels == 0;
  return {pass, "involution failures " + std::to_string(bad_involution) + "/2000; lambda max |sum-1| " +
                    Fmt("%.1e", worst_sum) + ", negatives " + std::to_string(negative) +
                    "; pi_1 non-identity entries " + std::to_string(bad_first_perm) +
                    "; inter labels changed by public data " + std::to_string(bad_labels)};
}

// ---------------------------------------------------------------------------
// 4. Utility.

struct UtilityRuns {
  double baseline = 0.0;
  double hidden = 0.0;
};

UtilityRuns RunUtility(const Corpora& corpora, const fs::path& dir, int workers) {
  ExperimentConfig base;
  base.federated.rounds = kUtilityRounds;
  ExperimentConfig th = base;
  th.texthide.m = 16;
  th.texthide.k = 2;
  UtilityRuns out;
  for (ExperimentConfig* c : {&base, &th}) {
    const TrainOutcome o = TrainModel(*c, corpora, {.workers = workers, .config_hash = ConfigHash(*c)});
    WriteTrainReports(dir / ("train_" + o.setup.hide.SchemeTag()), Ctx(*c), o);
    (c == &base ? out.baseline : out.hidden) = o.accuracy;
  }
  return out;
}

Verdict Utility(const UtilityRuns& r) {
  const bool pass = r.baseline >= kBaselineAccuracy && r.baseline - r.hidden <= kUtilityGap;
  return {pass, "baseline acc " + Fmt("%.3f", r.baseline) + " (>= " + Fmt("%.2f", kBaselineAccuracy) +
                    "), (16,2) intra acc " + Fmt("%.3f", r.hidden) + " (gap <= " +
                    Fmt("%.2f", kUtilityGap) + "), T=" + std::to_string(kUtilityRounds)};
}

// ---------------------------------------------------------------------------
// 5. Gradient matching.

std::vector<CellResult> RunGradMatch(const fs::path& dir, int workers) {
  const ExperimentConfig c;
  AttackConfig cfg = c.grad_match.attack;
  cfg.seed = c.seed;
  const auto cells = AttackSuccessRate(c.grad_match.grid, c.grad_match.victim, cfg, workers);
  WriteGradMatchReports(dir / "grad_match", Ctx(c), cells);
  return cells;
}

Verdict GradMatch(const std::vector<CellResult>& cells) {
  const auto rate = [&](int k, int d, bool masked) -> std::optional<double> {
    for (const CellResult& c : cells) {
      if (c.cell.k == k && c.cell.d == d && c.cell.masked == masked) return c.success_rate;
    }
    return std::nullopt;
  };
  const auto base = rate(1, 4, false);
  const auto d4 = rate(1, 4, true);
  const auto d64 = rate(1, 64, true);
  const bool a = base && *base >= kGradMatchBaselineRate;
  const bool b = d4 && d64 && *d4 >= *d64;
  bool c = true;
  std::string k2;
  for (const CellResult& cell : cells) {
    if (cell.cell.k < 2 || !cell.cell.masked) continue;
    c = c && cell.success_rate == 0.0;
    k2 += " " + cell.cell.Name() + "=" + Fmt("%.2f", cell.success_rate);
  }
  const int trials = cells.empty() ? 0 : static_cast<int>(cells[0].trials.size());
  return {a && b && c, std::string("(a) ") + (a ? "ok" : "no") + " no-defense rate " +
                           Fmt("%.2f", base.value_or(-1)) + "; (b) " + (b ? "ok" : "no") +
                           " k1 d4 " + Fmt("%.2f", d4.value_or(-1)) + " >= d64 " +
                           Fmt("%.2f", d64.value_or(-1)) + "; (c) " + (c ? "ok" : "no") +
                           " k=2 masked:" + k2 + "; " + std::to_string(trials) + " trials/cell"};
}

// ---------------------------------------------------------------------------
// 6 and 7. Similarity search and reconstruction.

struct SearchRuns {
  SearchReport baseline;
  SearchReport hidden;
};

ExperimentConfig HiddenScheme(ExperimentConfig c) {
  c.texthide.m = 256;
  c.texthide.k = 4;
  return c;
}

Params TrainBaselineEncoder(const Corpora& corpora, int workers) {
  const ExperimentConfig c;
  return TrainModel(c, corpora, {.workers = workers}).result.server.params;
}

SearchRuns RunRss(const Corpora& corpora, const Params& encoder, const fs::path& dir, int workers) {
  ExperimentConfig base;
  base.rss.queries = kRssQueries;
  const ExperimentConfig th = HiddenScheme(base);
  SearchRuns r{.baseline = RunRssExperiment(base, corpora, encoder, workers),
               .hidden = RunRssExperiment(th, corpora, encoder, workers)};
  WriteSearchReports(dir / "rss_baseline", "rss", Ctx(base), r.baseline);
  WriteSearchReports(dir / "rss_texthide", "rss", Ctx(th), r.hidden);
  return r;
}

Verdict Rss(const SearchRuns& r) {
  const double gap = std::abs(r.hidden.attack.mean.label_agree - r.hidden.random.mean.label_agree);
  const bool a = r.baseline.attack.mean.identity == 1.0;
  const bool b = r.hidden.attack.mean.identity <= kRssIdentityMax && gap <= kLabelGapMax;
  return {a && b && r.hidden.attack.count == static_cast<std::size_t>(kRssQueries),
          "index " + std::to_string(r.baseline.index_size) + " sentences; (a) baseline identity " +
              Fmt("%.3f", r.baseline.attack.mean.identity) + "; (b) (256,4) identity " +
              Fmt("%.3f", r.hidden.attack.mean.identity) + ", label " +
              Fmt("%.3f", r.hidden.attack.mean.label_agree) + " vs rand " +
              Fmt("%.3f", r.hidden.random.mean.label_agree) + " (gap " + Fmt("%.3f", gap) +
              "), " + std::to_string(r.hidden.attack.count) + " queries"};
}

SearchRuns RunRecon(const Corpora& corpora, const Params& encoder, const fs::path& dir,
                    int workers) {
  const ExperimentConfig base;
  const ExperimentConfig th = HiddenScheme(base);
  SearchRuns r{.baseline = RunReconExperiment(base, corpora, encoder, workers),
               .hidden = RunReconExperiment(th, corpora, encoder, workers)};
  WriteSearchReports(dir / "reprecon_baseline", "reprecon", Ctx(base), r.baseline);
  WriteSearchReports(dir / "reprecon_texthide", "reprecon", Ctx(th), r.hidden);
  return r;
}

Verdict Recon(const SearchRuns& r) {
  const double gap = std::abs(r.hidden.attack.mean.label_agree - r.hidden.random.mean.label_agree);
  const bool hidden_ok = r.hidden.attack.mean.identity <= kRssIdentityMax && gap <= kLabelGapMax;
  const bool sanity = r.baseline.attack.mean.identity >= kReconIdentityMin;
  return {hidden_ok && sanity,
          "(256,4) identity " + Fmt("%.3f", r.hidden.attack.mean.identity) + ", label " +
              Fmt("%.3f", r.hidden.attack.mean.label_agree) + " vs rand " +
              Fmt("%.3f", r.hidden.random.mean.label_agree) + " (gap " + Fmt("%.3f", gap) +
              "), " + std::to_string(r.hidden.attack.count) + " queries; identity scheme identity " +
              Fmt("%.3f", r.baseline.attack.mean.identity) + " (final train loss " +
              Fmt("%.2e", r.baseline.final_train_loss) + ")"};
}

// ---------------------------------------------------------------------------
// 8. Subset sum.

std::vector<SubsetSumReport> RunSubsetSum(const fs::path& dir, int workers) {
  const SubsetSumConfig grid[] = {{.n = 10, .k = 2}, {.n = 16, .k = 2}, {.n = 16, .k = 3},
                                  {.n = 32, .k = 3}, {.n = 64, .k = 2}, {.n = 64, .k = 3}};
  std::vector<SubsetSumReport> out;
  ExperimentConfig c;
  for (const SubsetSumConfig& g : grid) {
    c.subset_sum = g;
    out.push_back(RunSubsetSumExperiment(g, c.seed, workers));
    WriteSubsetSumReports(dir / ("subset_sum_n" + std::to_string(g.n) + "_k" + std::to_string(g.k)),
                          Ctx(c), out.back());
  }
  return out;
}

Verdict SubsetSum(const std::vector<SubsetSumReport>& reports) {
  int failed = 0;
  int wrong_count = 0;
  int total = 0;
  std::uint64_t c64 = 0;
  std::uint64_t c16 = 0;
  for (const SubsetSumReport& r : reports) {
    for (const SubsetSumInstance& inst : r.instances) {
      ++total;
      failed += !inst.success || inst.max_abs_error > 1e-9;
      wrong_count += inst.candidates != Binomial(r.config.n, r.config.k);
    }
    if (r.config.k == 3 && r.config.n == 64) c64 = r.instances[0].candidates;
    if (r.config.k == 3 && r.config.n == 16) c16 = r.instances[0].candidates;
  }
  return {failed == 0 && wrong_count == 0 && c64 == 41664 && c16 == 560,
          std::to_string(total - failed) + "/" + std::to_string(total) +
              " planted instances recovered (N <= 64, k <= 3); candidate count != C(N,k) in " +
              std::to_string(wrong_count) + "; C(64,3)/C(16,3) = " + std::to_string(c64) + "/" +
              std::to_string(c16)};
}

// ---------------------------------------------------------------------------
// 9. Determinism.

std::vector<fs::path> FilesUnder(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict Determinism(const fs::path& a, const fs::path& b) {
  const auto fa = FilesUnder(a);
  const auto fb = FilesUnder(b);
  if (fa != fb) return {false, "file sets differ (" + std::to_string(fa.size()) + " vs " +
                                   std::to_string(fb.size()) + ")"};
  std::vector<std::string> differing;
  for (const fs::path& f : fa) {
    if (Slurp(a / f) != Slurp(b / f)) differing.push_back(f.generic_string());
  }
  std::string detail = std::to_string(fa.size()) + " report files compared at workers 1 vs 8, " +
                       std::to_string(differing.size()) + " differ";
  for (std::size_t i = 0; i < differing.size() && i < 5; ++i) detail += " " + differing[i];
  return {differing.empty() && !fa.empty(), detail};
}

int Main(int argc, char** argv) {
  const fs::path root =
      argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "hidesim_acceptance";
  fs::remove_all(root);
  const fs::path w1 = root / "workers1";
  const fs::path w8 = root / "workers8";
  fs::create_directories(w1);
  fs::create_directories(w8);
  const Corpora corpora = LoadCorpora(ExperimentConfig{});

  auto t = std::chrono::steady_clock::now();
  Verdict v = GradientCorrectness();
  double s = Seconds(t);
  v.pass = v.pass && s < kGradBudgetSec;
  Report(1, "gradient correctness", v, s);

  t = std::chrono::steady_clock::now();
  v = BaselineEquivalence(corpora);
  Report(2, "baseline equivalence", v, Seconds(t));

  t = std::chrono::steady_clock::now();
  v = EncryptionAlgebra();
  s = Seconds(t);
  v.pass = v.pass && s < kAlgebraBudgetSec;
  Report(3, "encryption algebra", v, s);

  t = std::chrono::steady_clock::now();
  v = Utility(RunUtility(corpora, w1, 1));
  s = Seconds(t);
  v.pass = v.pass && s < kUtilityBudgetSec;
  Report(4, "utility", v, s);

  t = std::chrono::steady_clock::now();
  v = GradMatch(RunGradMatch(w1, 1));
  s = Seconds(t);
  v.pass = v.pass && s < kGradMatchBudgetSec;
  Report(5, "gradient-matching trend", v, s);

  t = std::chrono::steady_clock::now();
  const Params encoder = TrainBaselineEncoder(corpora, 1);
  v = Rss(RunRss(corpora, encoder, w1, 1));
  s = Seconds(t);
  v.pass = v.pass && s < kRssBudgetSec;
  Report(6, "RSS", v, s);

  t = std::chrono::steady_clock::now();
  v = Recon(RunRecon(corpora, encoder, w1, 1));
  s = Seconds(t);
  v.pass = v.pass && s < kReconBudgetSec;
  Report(7, "RepRecon", v, s);

  t = std::chrono::steady_clock::now();
  v = SubsetSum(RunSubsetSum(w1, 1));
  s = Seconds(t);
  v.pass = v.pass && s < kSubsetSumBudgetSec;
  Report(8, "subset-sum oracle", v, s);

  t = std::chrono::steady_clock::now();
  RunUtility(corpora, w8, 8);
  RunGradMatch(w8, 8);
  const Params encoder8 = TrainBaselineEncoder(corpora, 8);
  RunRss(corpora, encoder8, w8, 8);
  RunRecon(corpora, encoder8, w8, 8);
  RunSubsetSum(w8, 8);
  Report(9, "determinism", Determinism(w1, w8), Seconds(t));

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace hidesim

int main(int argc, char** argv) { return hidesim::Main(argc, argv); }
