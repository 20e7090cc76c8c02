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

#include "hidesim/config.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "hidesim/errors.h"
#include "json.hpp"

namespace hidesim {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Visits the keys of one JSON object, rejecting any that nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(Where() + " must be an object");
  }

  const json* Find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string PathOf(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void Int(const char* key, int& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) throw ConfigError(PathOf(key) + " must be an integer");
      const auto value = v->get<std::int64_t>();
      if (value < INT32_MIN || value > INT32_MAX) throw ConfigError(PathOf(key) + " out of range");
      out = static_cast<int>(value);
    }
  }
  void U64(const char* key, std::uint64_t& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(PathOf(key) + " must be a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }
  void Double(const char* key, double& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number()) throw ConfigError(PathOf(key) + " must be a number");
      out = v->get<double>();
    }
  }
  void Bool(const char* key, bool& out) {
    if (const json* v = Find(key)) {
      if (!v->is_boolean()) throw ConfigError(PathOf(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }
  void String(const char* key, std::string& out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) throw ConfigError(PathOf(key) + " must be a string");
      out = v->get<std::string>();
    }
  }
  void OptionalPath(const char* key, std::optional<std::string>& out) {
    if (const json* v = Find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        throw ConfigError(PathOf(key) + " must be a string or null");
      }
    }
  }
  void IntList(const char* key, std::vector<int>& out) {
    if (const json* v = Find(key)) {
      if (!v->is_array()) throw ConfigError(PathOf(key) + " must be an array");
      out.clear();
      for (const json& e : *v) {
        if (!e.is_number_integer()) throw ConfigError(PathOf(key) + " must hold integers");
        out.push_back(e.get<int>());
      }
    }
  }
  template <typename Enum>
  void Choice(const char* key, Enum& out, std::initializer_list<std::pair<const char*, Enum>> map) {
    if (const json* v = Find(key)) {
      if (v->is_string()) {
        for (const auto& [name, value] : map) {
          if (v->get<std::string>() == name) {
            out = value;
            return;
          }
        }
      }
      std::string names;
      for (const auto& [name, value] : map) names += std::string(names.empty() ? "" : "|") + name;
      throw ConfigError(PathOf(key) + " must be one of " + names);
    }
  }
  template <typename Fn>
  void Object(const char* key, Fn&& fn) {
    if (const json* v = Find(key)) {
      ObjectReader child(*v, PathOf(key));
      fn(child);
      child.Finish();
    }
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown config key '" + PathOf(it.key().c_str()) + "'");
    }
  }

 private:
  std::string Where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr std::initializer_list<std::pair<const char*, HideVariant>> kVariants = {
    {"intra", HideVariant::kIntra}, {"inter", HideVariant::kInter}};
constexpr std::initializer_list<std::pair<const char*, MaskSchedule>> kSchedules = {
    {"epoch", MaskSchedule::kPerEpoch}, {"batch", MaskSchedule::kPerBatch}};
constexpr std::initializer_list<std::pair<const char*, EvalMode>> kEvalModes = {
    {"keyed", EvalMode::kKeyed}, {"plain", EvalMode::kPlain}};
constexpr std::initializer_list<std::pair<const char*, OptimizerMode>> kOptimizers = {
    {"adam", OptimizerMode::kAdam}, {"sgd", OptimizerMode::kSgd}};

template <typename Enum>
const char* NameOf(Enum value, std::initializer_list<std::pair<const char*, Enum>> map) {
  for (const auto& [name, v] : map) {
    if (v == value) return name;
  }
  return "?";
}

void ReadAdam(ObjectReader& r, AdamConfig& adam) {
  r.Double("learning_rate", adam.learning_rate);
  r.Double("beta1", adam.beta1);
  r.Double("beta2", adam.beta2);
  r.Double("epsilon", adam.epsilon);
  r.Double("weight_decay", adam.weight_decay);
}

ordered_json DumpAdam(const AdamConfig& adam) {
  ordered_json j;
  j["learning_rate"] = adam.learning_rate;
  j["beta1"] = adam.beta1;
  j["beta2"] = adam.beta2;
  j["epsilon"] = adam.epsilon;
  j["weight_decay"] = adam.weight_decay;
  return j;
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  ObjectReader r(root, "");
  r.U64("seed", c.seed);
  r.String("output_dir", c.output_dir);
  r.Object("corpus", [&](ObjectReader& o) {
    o.OptionalPath("train", c.corpus.train_path);
    o.OptionalPath("test", c.corpus.test_path);
    o.OptionalPath("public", c.corpus.public_path);
    o.Int("test_per_class", c.corpus.test_per_class);
    o.Int("public_per_class", c.corpus.public_per_class);
    o.Object("synthetic", [&](ObjectReader& s) {
      SyntheticParams& p = c.corpus.synthetic;
      s.Int("num_classes", p.num_classes);
      s.Int("per_class", p.per_class);
      s.Int("vocab_size", p.vocab_size);
      s.Int("signal_tokens_per_class", p.signal_tokens_per_class);
      s.Int("min_length", p.min_length);
      s.Int("max_length", p.max_length);
      s.Double("signal_prob", p.signal_prob);
    });
  });
  r.Object("model", [&](ObjectReader& o) {
    o.Int("vocab_size", c.model.vocab_size);
    o.Int("embed_dim", c.model.embed_dim);
    o.Int("rep_dim", c.model.rep_dim);
    o.IntList("hidden", c.model.hidden);
    o.Int("num_classes", c.model.num_classes);
  });
  r.Object("texthide", [&](ObjectReader& o) {
    TextHideParams& t = c.texthide;
    o.Bool("enabled", t.enabled);
    if (const json* m = o.Find("m")) {
      if (m->is_string() && m->get<std::string>() == "inf") {
        t.fresh_masks = true;
        t.m = 0;
      } else if (m->is_number_integer()) {
        t.fresh_masks = false;
        t.m = m->get<int>();
      } else {
        throw ConfigError("texthide.m must be an integer or \"inf\"");
      }
    }
    o.Int("k", t.k);
    o.Choice("variant", t.variant, kVariants);
    o.Choice("schedule", t.schedule, kSchedules);
    o.Choice("eval", t.eval_mode, kEvalModes);
  });
  r.Object("federated", [&](ObjectReader& o) {
    FedParams& f = c.federated;
    o.Int("clients", f.clients);
    o.Int("rounds", f.rounds);
    o.Int("batch_size", f.batch_size);
    o.Double("learning_rate", f.learning_rate);
    o.Choice("optimizer", f.optimizer, kOptimizers);
    o.Double("weight_decay", f.weight_decay);
    o.Int("eval_every", f.eval_every);
    o.Int("checkpoint_every", f.checkpoint_every);
  });
  r.Object("grad_match", [&](ObjectReader& o) {
    GradMatchConfig& g = c.grad_match;
    o.Int("iterations", g.attack.iterations);
    o.Object("optimizer", [&](ObjectReader& a) { ReadAdam(a, g.attack.optimizer); });
    o.Bool("reveal_true_label", g.attack.reveal_true_label);
    o.Bool("fixed_single_mask", g.attack.fixed_single_mask);
    o.Double("threshold", g.attack.threshold);
    o.Int("trials", g.attack.trials);
    o.Int("log_every", g.attack.log_every);
    o.Int("input_dim", g.victim.input_dim);
    o.IntList("victim_hidden", g.victim.hidden);
    o.Int("num_classes", g.victim.num_classes);
    if (const json* grid = o.Find("grid")) {
      if (!grid->is_array()) throw ConfigError("grad_match.grid must be an array");
      g.grid.clear();
      for (std::size_t i = 0; i < grid->size(); ++i) {
        GradMatchCell cell;
        ObjectReader e((*grid)[i], "grad_match.grid[" + std::to_string(i) + "]");
        e.Int("k", cell.k);
        e.Int("d", cell.d);
        e.Bool("masked", cell.masked);
        e.Finish();
        g.grid.push_back(cell);
      }
    }
  });
  r.Object("rss", [&](ObjectReader& o) { o.Int("queries", c.rss.queries); });
  r.Object("reprecon", [&](ObjectReader& o) {
    ReconExperimentConfig& x = c.reprecon;
    o.Int("hidden", x.net.hidden);
    o.Int("epochs", x.net.epochs);
    o.Int("batch_size", x.net.batch_size);
    o.Object("optimizer", [&](ObjectReader& a) { ReadAdam(a, x.net.optimizer); });
    o.Int("queries", x.queries);
    o.Int("pairs_per_sentence", x.pairs_per_sentence);
  });
  r.Object("subset_sum", [&](ObjectReader& o) {
    o.Int("n", c.subset_sum.n);
    o.Int("k", c.subset_sum.k);
    o.Int("dim", c.subset_sum.dim);
    o.Int("instances", c.subset_sum.instances);
    o.Bool("early_exit", c.subset_sum.early_exit);
  });
  r.Finish();
  ValidateConfig(c);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

void ValidateConfig(const ExperimentConfig& c) {
  Require(c.texthide.m >= 0, "texthide.m must be >= 0");
  Require(c.texthide.k >= 1, "texthide.k must be >= 1");
  Require(c.federated.clients >= 1, "federated.clients must be >= 1");
  Require(c.federated.batch_size >= 1, "federated.batch_size must be >= 1");
  Require(c.federated.rounds >= 0, "federated.rounds must be >= 0");
  Require(c.federated.learning_rate > 0.0, "federated.learning_rate must be positive");
  Require(c.federated.eval_every >= 0, "federated.eval_every must be >= 0");
  Require(c.federated.checkpoint_every >= 0, "federated.checkpoint_every must be >= 0");
  Require(c.model.vocab_size >= 0, "model.vocab_size must be >= 0 (0 = from corpus)");
  Require(c.model.embed_dim >= 1 && c.model.rep_dim >= 1, "model dimensions must be positive");
  for (int h : c.model.hidden) Require(h >= 1, "model.hidden widths must be positive");
  Require(c.model.num_classes >= 2, "model.num_classes must be >= 2");
  const bool has_public = c.corpus.public_path.has_value() || c.corpus.public_per_class > 0;
  Require(!(c.texthide.enabled && c.texthide.variant == HideVariant::kInter) || has_public,
          "texthide.variant=inter requires a public corpus");
  Require(c.corpus.test_per_class >= 0 && c.corpus.public_per_class >= 0,
          "corpus split sizes must be >= 0");
  const GradMatchConfig& g = c.grad_match;
  Require(g.attack.iterations >= 1, "grad_match.iterations must be >= 1");
  Require(g.attack.threshold > 0.0, "grad_match.threshold must be positive");
  Require(g.attack.trials >= 1, "grad_match.trials must be >= 1");
  Require(g.attack.log_every >= 1, "grad_match.log_every must be >= 1");
  Require(g.victim.input_dim >= 1 && g.victim.num_classes >= 2, "grad_match victim dims invalid");
  for (const GradMatchCell& cell : g.grid) {
    Require(cell.k >= 1 && cell.d >= 1, "grad_match.grid cells need k >= 1 and d >= 1");
  }
  Require(c.rss.queries >= 1, "rss.queries must be >= 1");
  Require(c.reprecon.queries >= 1, "reprecon.queries must be >= 1");
  Require(c.reprecon.net.epochs >= 0 && c.reprecon.net.batch_size >= 1 && c.reprecon.net.hidden >= 1,
          "reprecon schedule invalid");
  Require(c.reprecon.pairs_per_sentence >= 1, "reprecon.pairs_per_sentence must be >= 1");
  Require(c.subset_sum.k >= 1 && c.subset_sum.n >= c.subset_sum.k && c.subset_sum.n <= 4096,
          "subset_sum needs 1 <= k <= n <= 4096");
  Require(c.subset_sum.dim >= 1 && c.subset_sum.instances >= 1, "subset_sum sizes invalid");
}

std::string DumpConfig(const ExperimentConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  auto path_or_null = [](const std::optional<std::string>& p) {
    return p ? ordered_json(*p) : ordered_json(nullptr);
  };
  const SyntheticParams& s = c.corpus.synthetic;
  j["corpus"] = {{"train", path_or_null(c.corpus.train_path)},
                 {"test", path_or_null(c.corpus.test_path)},
                 {"public", path_or_null(c.corpus.public_path)},
                 {"test_per_class", c.corpus.test_per_class},
                 {"public_per_class", c.corpus.public_per_class},
                 {"synthetic",
                  {{"num_classes", s.num_classes},
                   {"per_class", s.per_class},
                   {"vocab_size", s.vocab_size},
                   {"signal_tokens_per_class", s.signal_tokens_per_class},
                   {"min_length", s.min_length},
                   {"max_length", s.max_length},
                   {"signal_prob", s.signal_prob}}}};
  j["model"] = {{"vocab_size", c.model.vocab_size},
                {"embed_dim", c.model.embed_dim},
                {"rep_dim", c.model.rep_dim},
                {"hidden", c.model.hidden},
                {"num_classes", c.model.num_classes}};
  const TextHideParams& t = c.texthide;
  j["texthide"] = {{"enabled", t.enabled},
                   {"m", t.fresh_masks ? ordered_json("inf") : ordered_json(t.m)},
                   {"k", t.k},
                   {"variant", NameOf(t.variant, kVariants)},
                   {"schedule", NameOf(t.schedule, kSchedules)},
                   {"eval", NameOf(t.eval_mode, kEvalModes)}};
  const FedParams& f = c.federated;
  j["federated"] = {{"clients", f.clients},
                    {"rounds", f.rounds},
                    {"batch_size", f.batch_size},
                    {"learning_rate", f.learning_rate},
                    {"optimizer", NameOf(f.optimizer, kOptimizers)},
                    {"weight_decay", f.weight_decay},
                    {"eval_every", f.eval_every},
                    {"checkpoint_every", f.checkpoint_every}};
  const GradMatchConfig& g = c.grad_match;
  ordered_json grid = ordered_json::array();
  for (const GradMatchCell& cell : g.grid) {
    grid.push_back({{"k", cell.k}, {"d", cell.d}, {"masked", cell.masked}});
  }
  j["grad_match"] = {{"iterations", g.attack.iterations},
                     {"optimizer", DumpAdam(g.attack.optimizer)},
                     {"reveal_true_label", g.attack.reveal_true_label},
                     {"fixed_single_mask", g.attack.fixed_single_mask},
                     {"threshold", g.attack.threshold},
                     {"trials", g.attack.trials},
                     {"log_every", g.attack.log_every},
                     {"input_dim", g.victim.input_dim},
                     {"victim_hidden", g.victim.hidden},
                     {"num_classes", g.victim.num_classes},
                     {"grid", grid}};
  j["rss"] = {{"queries", c.rss.queries}};
  j["reprecon"] = {{"hidden", c.reprecon.net.hidden},
                   {"epochs", c.reprecon.net.epochs},
                   {"batch_size", c.reprecon.net.batch_size},
                   {"optimizer", DumpAdam(c.reprecon.net.optimizer)},
                   {"queries", c.reprecon.queries},
                   {"pairs_per_sentence", c.reprecon.pairs_per_sentence}};
  j["subset_sum"] = {{"n", c.subset_sum.n},
                     {"k", c.subset_sum.k},
                     {"dim", c.subset_sum.dim},
                     {"instances", c.subset_sum.instances},
                     {"early_exit", c.subset_sum.early_exit}};
  return j.dump(2);
}

std::string ConfigHash(const ExperimentConfig& config) {
  // Where results land does not change what they are.
  ExperimentConfig canonical = config;
  canonical.output_dir.clear();
  const std::string text = DumpConfig(canonical);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TrainSetup MakeTrainSetup(const ExperimentConfig& config, int vocab_size) {
  TrainSetup setup{.seed = config.seed, .dims = config.model, .hide = config.texthide,
                   .fed = config.federated};
  if (setup.dims.vocab_size == 0) {
    setup.dims.vocab_size = vocab_size;
  } else if (setup.dims.vocab_size != vocab_size) {
    throw ConfigError("model.vocab_size " + std::to_string(setup.dims.vocab_size) +
                      " does not match the corpus vocabulary (" + std::to_string(vocab_size) +
                      "); use 0 to derive it");
  }
  return setup;
}

}  // namespace hidesim
