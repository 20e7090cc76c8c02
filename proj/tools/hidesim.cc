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

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hidesim/config.h"
#include "hidesim/errors.h"
#include "hidesim/experiments.h"
#include "hidesim/log.h"

namespace hidesim {
namespace {

namespace fs = std::filesystem;

constexpr int kExitPartial = 3;

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 1;
};

struct Context {
  ExperimentConfig config;
  fs::path out;
  int workers = 1;
  ReportContext report;
};

Context Resolve(const GlobalFlags& flags) {
  Context ctx;
  if (!flags.config_path.empty()) ctx.config = LoadConfig(flags.config_path);
  if (flags.seed) ctx.config.seed = *flags.seed;
  if (!flags.out.empty()) ctx.config.output_dir = flags.out;
  ValidateConfig(ctx.config);
  ctx.out = ctx.config.output_dir;
  ctx.workers = std::max(1, flags.workers);
  ctx.report = {ConfigHash(ctx.config), ctx.config.seed};
  Log(LogLevel::kInfo, "config hash " + ctx.report.config_hash + ", seed " +
                           std::to_string(ctx.config.seed) + ", output " + ctx.out.string());
  return ctx;
}

int CmdGenCorpus(const Context& ctx) {
  const Corpora c = LoadCorpora(ctx.config);
  const fs::path dir = ctx.out / "corpus";
  fs::create_directories(dir);
  const std::pair<const char*, const Dataset*> splits[] = {
      {"train", &c.train}, {"test", &c.test}, {"public", &c.pub}};
  for (const auto& [name, data] : splits) {
    if (data->empty()) continue;
    WriteTsv(*data, dir / (std::string(name) + ".tsv"));
    WriteCorpusStats(dir / (std::string(name) + ".stats.json"), ctx.report, *data, c.vocab);
  }
  std::cout << "wrote corpus to " << dir.string() << " (" << c.train.size() << " train, "
            << c.test.size() << " test, " << c.pub.size() << " public, vocab " << c.vocab.size()
            << ")\n";
  return 0;
}

int CmdTrain(const Context& ctx, const std::string& resume) {
  const Corpora corpora = LoadCorpora(ctx.config);
  const fs::path dir = ctx.out / "train";
  TrainOptions options{.workers = ctx.workers, .config_hash = ctx.report.config_hash};
  if (ctx.config.federated.checkpoint_every > 0) options.checkpoint_dir = dir / "checkpoints";
  if (!resume.empty()) {
    if (!fs::exists(resume)) throw ConfigError("no checkpoint to resume from at " + resume);
    options.resume_from = resume;
  }
  options.on_round = [](const RoundLog& log) {
    if (log.accuracy) {
      Log(LogLevel::kInfo, "round " + std::to_string(log.round) + " loss " +
                               std::to_string(log.loss) + " accuracy " +
                               std::to_string(*log.accuracy));
    }
  };
  const TrainOutcome outcome = TrainModel(ctx.config, corpora, options);
  WriteTrainReports(dir, ctx.report, outcome);
  std::cout << SchemeLabel(outcome.setup.hide) << " accuracy " << outcome.accuracy << " after "
            << outcome.result.server.round << " rounds; wrote " << (dir / "model.thmc").string()
            << "\n";
  return 0;
}

int CmdGradMatch(const Context& ctx) {
  AttackConfig cfg = ctx.config.grad_match.attack;
  cfg.seed = ctx.config.seed;
  const std::vector<CellResult> cells =
      AttackSuccessRate(ctx.config.grad_match.grid, ctx.config.grad_match.victim, cfg, ctx.workers);
  const fs::path dir = ctx.out / "grad_match";
  WriteGradMatchReports(dir, ctx.report, cells);
  int failed = 0;
  for (const CellResult& c : cells) {
    std::cout << c.cell.Name() << " success " << c.success_rate << "\n";
    for (const TrialRecord& t : c.trials) {
      if (t.diagnostic.empty()) continue;
      ++failed;
      std::cerr << "failed trial " << c.cell.Name() << "/" << t.trial << ": " << t.diagnostic
                << "\n";
    }
  }
  std::cout << "wrote " << dir.string() << "\n";
  return failed == 0 ? 0 : kExitPartial;
}

Params LoadModel(const Context& ctx, const std::string& model_flag, const Corpora& corpora) {
  const fs::path path = model_flag.empty() ? ctx.out / "train" / "model.thmc" : fs::path(model_flag);
  if (!fs::exists(path)) {
    throw ConfigError("no trained model at " + path.string() +
                      "; run `hidesim train` first (a baseline config, texthide.enabled=false, "
                      "gives the unencrypted encoder the attack expects)");
  }
  Checkpoint ckpt = ReadCheckpoint(path);
  if (ckpt.params.dims().vocab_size != corpora.vocab.size() ||
      ckpt.params.dims().num_classes != ctx.config.model.num_classes) {
    throw ConfigError("model at " + path.string() + " does not match the configured corpus");
  }
  Log(LogLevel::kInfo, "encoder from " + path.string());
  return std::move(ckpt.params);
}

int CmdSearch(const Context& ctx, const std::string& which, const std::string& model_flag) {
  const Corpora corpora = LoadCorpora(ctx.config);
  const Params params = LoadModel(ctx, model_flag, corpora);
  const SearchReport report = which == "rss"
                                  ? RunRssExperiment(ctx.config, corpora, params, ctx.workers)
                                  : RunReconExperiment(ctx.config, corpora, params, ctx.workers);
  const fs::path dir = ctx.out / which;
  WriteSearchReports(dir, which, ctx.report, report);
  std::cout << MetricsCsvHeader() << "\n"
            << MetricsCsvRow(report.scheme, report.attack) << "\n"
            << MetricsCsvRow("Rand", report.random) << "\n";
  int failed = 0;
  for (const QueryRecord& q : report.queries) {
    if (q.error.empty()) continue;
    ++failed;
    std::cerr << "failed query " << q.query << " (sentence " << q.truth_id << "): " << q.error
              << "\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return failed == 0 ? 0 : kExitPartial;
}

int CmdSubsetSum(const Context& ctx) {
  const SubsetSumReport report =
      RunSubsetSumExperiment(ctx.config.subset_sum, ctx.config.seed, ctx.workers);
  const fs::path dir = ctx.out / "subset_sum";
  WriteSubsetSumReports(dir, ctx.report, report);
  int failed = 0;
  for (const SubsetSumInstance& inst : report.instances) {
    if (inst.success) continue;
    ++failed;
    std::cerr << "instance " << inst.instance << ": planted subset not recovered\n";
  }
  std::cout << "N=" << report.config.n << " k=" << report.config.k << " success "
            << report.success_rate << " candidates C(N,k)=" << report.expected_candidates
            << "\nwrote " << dir.string() << "\n";
  return failed == 0 ? 0 : kExitPartial;
}

int CmdReport(const Context& ctx) {
  const MergeResult merged = MergeReports(ctx.out);
  std::cout << "merged " << merged.inputs.size() << " files into "
            << (ctx.out / "summary.csv").string() << "\n";
  if (!merged.warnings.empty()) {
    std::cout << merged.warnings.size() << " warning(s) recorded in "
              << (ctx.out / "summary_warnings.txt").string() << "\n";
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"TextHide simulation: corpus generation, federated training and attacks"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "experiment config (JSON)");
  app.add_option("--seed", flags.seed, "root seed (overrides the config)");
  app.add_option("--out", flags.out, "output directory (overrides the config)");
  app.add_option("--workers", flags.workers, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);

  CLI::App* gen = app.add_subcommand("gen-corpus", "write the corpus splits as TSV");
  CLI::App* train = app.add_subcommand("train", "run federated training");
  std::string resume;
  train->add_option("--resume", resume, "resume from a training checkpoint");
  CLI::App* attack = app.add_subcommand("attack", "run an attack experiment");
  attack->require_subcommand(1);
  CLI::App* gm = attack->add_subcommand("grad-match", "gradient matching success grid");
  CLI::App* rss = attack->add_subcommand("rss", "representation similarity search");
  CLI::App* rr = attack->add_subcommand("reprecon", "representation reconstruction");
  CLI::App* ss = attack->add_subcommand("subset-sum", "planted subset-sum recovery");
  std::string model;
  for (CLI::App* sub : {rss, rr}) {
    sub->add_option("--model", model, "trained model (default <out>/train/model.thmc)");
  }
  CLI::App* report = app.add_subcommand("report", "merge report CSVs into summary.csv");
  CLI::App* show = app.add_subcommand("show-config", "print the resolved config and its hash");
  for (CLI::App* sub : {gen, train, attack, gm, rss, rr, ss, report, show}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const Context ctx = Resolve(flags);
    if (*gen) return CmdGenCorpus(ctx);
    if (*train) return CmdTrain(ctx, resume);
    if (*gm) return CmdGradMatch(ctx);
    if (*rss) return CmdSearch(ctx, "rss", model);
    if (*rr) return CmdSearch(ctx, "reprecon", model);
    if (*ss) return CmdSubsetSum(ctx);
    if (*report) return CmdReport(ctx);
    if (*show) {
      std::cout << DumpConfig(ctx.config) << "\nconfig_hash " << ctx.report.config_hash << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "hidesim: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace
}  // namespace hidesim

int main(int argc, char** argv) { return hidesim::Main(argc, argv); }
