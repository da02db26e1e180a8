// Copyright 2026 The asgcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asgcl/config.h"

#include <set>

#include "asgcl/errors.h"

namespace asgcl {

using nlohmann::json;

namespace {

// Reads optional keys from one JSON object and rejects keys nobody asked
// for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& value) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      value = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(where_ + ": unknown key \"" + it.key() + "\"");
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json dataset_json(const DatasetSpec& d) {
  json j{{"name", d.name}};
  if (d.files) {
    j["edges"] = d.files->edges;
    j["features"] = d.files->features;
    j["labels"] = d.files->labels;
  }
  if (d.sbm) {
    j["sbm"] = {{"n", d.sbm->n},
                {"blocks", d.sbm->blocks},
                {"p_in", d.sbm->p_in},
                {"p_out", d.sbm->p_out},
                {"feature_noise", d.sbm->feature_noise},
                {"seed", d.sbm->seed}};
  }
  return j;
}

DatasetSpec dataset_from(const json& j) {
  DatasetSpec d;
  ObjectReader r(j, "dataset");
  r.get("name", d.name);
  DatasetFiles files;
  bool has_files = j.contains("edges") || j.contains("features") ||
                   j.contains("labels");
  r.get("edges", files.edges);
  r.get("features", files.features);
  r.get("labels", files.labels);
  if (const json* s = r.child("sbm")) {
    SbmParams p;
    ObjectReader sr(*s, "dataset.sbm");
    sr.get("n", p.n);
    sr.get("blocks", p.blocks);
    sr.get("p_in", p.p_in);
    sr.get("p_out", p.p_out);
    sr.get("feature_noise", p.feature_noise);
    sr.get("seed", p.seed);
    sr.finish();
    d.sbm = p;
  } else if (has_files) {
    d.sbm.reset();
  }
  if (has_files) d.files = files;
  r.finish();
  return d;
}

}  // namespace

void RunConfig::validate() const {
  dataset.validate();
  train.validate();
  if (eval.seeds.empty()) throw ConfigError("eval.seeds must not be empty");
  if (eval.task != "classification" && eval.task != "clustering" &&
      eval.task != "both") {
    throw ConfigError("eval.task must be classification, clustering or both");
  }
  if (spectra.seeds < 1) throw ConfigError("spectra.seeds must be >= 1");
  for (double b : spectra.budgets) {
    if (!(b > 0.0 && b <= 1.0)) throw ConfigError("spectra budgets must be in (0, 1]");
  }
  for (double r : robustness.ratios) {
    if (!(r >= 0.0 && r <= 0.8)) {
      throw ConfigError("robustness ratios must be in [0, 0.8]");
    }
  }
  if (out.empty()) throw ConfigError("out must not be empty");
}

json to_json(const RunConfig& c) {
  const TrainConfig& t = c.train;
  json j;
  j["dataset"] = dataset_json(c.dataset);
  j["train"] = {{"epochs", t.epochs},
                {"lr", t.lr},
                {"weight_decay", t.weight_decay},
                {"layers", t.layers},
                {"k", t.extra_diffusions},
                {"hidden", t.hidden},
                {"seed", t.seed},
                {"resample_each_epoch", t.resample_each_epoch},
                {"raw_diffusion", t.raw_diffusion},
                {"ablation",
                 {{"no_spectral", t.ablation.no_spectral},
                  {"symmetric_encoder", t.ablation.symmetric_encoder},
                  {"no_upper", t.ablation.no_upper},
                  {"no_lower", t.ablation.no_lower}}}};
  j["augment"] = {{"epsilon", t.budget},
                  {"view1_scale", t.view1_budget_scale},
                  {"view2_scale", t.view2_budget_scale},
                  {"rounds", t.augment_rounds},
                  {"step", t.augment_step},
                  {"noise", t.augment_noise}};
  j["loss"] = {{"alpha", t.loss.alpha},
               {"beta", t.loss.beta},
               {"temperature", t.loss.temperature},
               {"batch", t.loss.batch},
               {"use_lower", t.loss.use_lower},
               {"use_upper", t.loss.use_upper}};
  j["eval"] = {{"seeds", c.eval.seeds},
               {"task", c.eval.task},
               {"raw_baseline", c.eval.raw_baseline}};
  j["spectra"] = {{"budgets", c.spectra.budgets}, {"seeds", c.spectra.seeds}};
  j["robustness"] = {{"ratios", c.robustness.ratios},
                     {"retrain", c.robustness.retrain}};
  j["sweep"] = {{"epsilon", c.sweep.budgets},
                {"k", c.sweep.extra_diffusions},
                {"alpha", c.sweep.alphas},
                {"beta", c.sweep.betas}};
  j["out"] = c.out;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  ObjectReader root(j, "config");
  if (const json* d = root.child("dataset")) c.dataset = dataset_from(*d);
  TrainConfig& t = c.train;
  if (const json* tj = root.child("train")) {
    ObjectReader r(*tj, "train");
    r.get("epochs", t.epochs);
    r.get("lr", t.lr);
    r.get("weight_decay", t.weight_decay);
    r.get("layers", t.layers);
    r.get("k", t.extra_diffusions);
    r.get("hidden", t.hidden);
    r.get("seed", t.seed);
    r.get("resample_each_epoch", t.resample_each_epoch);
    r.get("raw_diffusion", t.raw_diffusion);
    if (const json* a = r.child("ablation")) {
      ObjectReader ar(*a, "train.ablation");
      ar.get("no_spectral", t.ablation.no_spectral);
      ar.get("symmetric_encoder", t.ablation.symmetric_encoder);
      ar.get("no_upper", t.ablation.no_upper);
      ar.get("no_lower", t.ablation.no_lower);
      ar.finish();
    }
    r.finish();
  }
  if (const json* aj = root.child("augment")) {
    ObjectReader r(*aj, "augment");
    r.get("epsilon", t.budget);
    r.get("view1_scale", t.view1_budget_scale);
    r.get("view2_scale", t.view2_budget_scale);
    r.get("rounds", t.augment_rounds);
    r.get("step", t.augment_step);
    r.get("noise", t.augment_noise);
    r.finish();
  }
  if (const json* lj = root.child("loss")) {
    ObjectReader r(*lj, "loss");
    r.get("alpha", t.loss.alpha);
    r.get("beta", t.loss.beta);
    r.get("temperature", t.loss.temperature);
    r.get("batch", t.loss.batch);
    r.get("use_lower", t.loss.use_lower);
    r.get("use_upper", t.loss.use_upper);
    r.finish();
  }
  if (const json* ej = root.child("eval")) {
    ObjectReader r(*ej, "eval");
    r.get("seeds", c.eval.seeds);
    r.get("task", c.eval.task);
    r.get("raw_baseline", c.eval.raw_baseline);
    r.finish();
  }
  if (const json* sj = root.child("spectra")) {
    ObjectReader r(*sj, "spectra");
    r.get("budgets", c.spectra.budgets);
    r.get("seeds", c.spectra.seeds);
    r.finish();
  }
  if (const json* rj = root.child("robustness")) {
    ObjectReader r(*rj, "robustness");
    r.get("ratios", c.robustness.ratios);
    r.get("retrain", c.robustness.retrain);
    r.finish();
  }
  if (const json* wj = root.child("sweep")) {
    ObjectReader r(*wj, "sweep");
    r.get("epsilon", c.sweep.budgets);
    r.get("k", c.sweep.extra_diffusions);
    r.get("alpha", c.sweep.alphas);
    r.get("beta", c.sweep.betas);
    r.finish();
  }
  root.get("out", c.out);
  root.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(std::string("unreadable config: ") + e.what());
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config " + path + " is not valid JSON");
  return run_config_from_json(j);
}

}  // namespace asgcl
