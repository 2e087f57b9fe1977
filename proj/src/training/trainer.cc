// training/trainer.cc

// Copyright 2026  adaptASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "training/trainer.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/util.h"
#include "corpus/wav.h"

namespace adaptasr::training {

using corpus::UtteranceRecord;
using enhancement::SEBatch;
using tape::Graph;

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::pretrain: return "pretrain";
    case Phase::adapt: return "adapt";
    case Phase::adapt_with_se: return "adapt_with_se";
  }
  return "pretrain";
}

std::string param_content_hash(
    const std::vector<std::pair<std::string, tape::Param*>>& params) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [name, p] : params) {
    mix(name.data(), name.size());
    mix(p->value.data(), p->value.size() * sizeof(double));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void apply_backbone(const Checkpoint& ckpt, asr::Model* model) {
  require(ckpt.meta.config_hash == model->config().signature(),
          str_cat("apply_backbone: config hash mismatch (checkpoint ",
                  ckpt.meta.config_hash, " vs model ",
                  model->config().signature(), ")"));
  for (auto& [name, p] : model->params().map()) {
    auto it = ckpt.params.find(name);
    require(it != ckpt.params.end(),
            str_cat("apply_backbone: checkpoint is missing '", name, "'"));
    require(it->second.same_shape(p.value),
            str_cat("apply_backbone: shape mismatch for '", name, "'"));
    p.value = it->second;
  }
}

void apply_trainables(const Checkpoint& ckpt, asr::Model* model) {
  for (const auto& [name, m] : ckpt.params) {
    tape::ParamStore* store = nullptr;
    if (name.rfind("adapter.", 0) == 0) {
      require(model->adapters() != nullptr,
              "apply_trainables: checkpoint has adapter params but the model "
              "has no adapters inserted");
      store = &model->adapters()->params();
    } else if (name.rfind("se.", 0) == 0) {
      require(model->frontend() != nullptr,
              "apply_trainables: checkpoint has front-end params but no "
              "front-end is attached");
      store = &model->frontend()->params();
    } else {
      throw std::invalid_argument(
          str_cat("apply_trainables: unexpected parameter '", name, "'"));
    }
    tape::Param& p = store->at(name);
    require(m.same_shape(p.value),
            str_cat("apply_trainables: shape mismatch for '", name, "'"));
    p.value = m;
  }
}

Mat Trainer::features_for(const UtteranceRecord& rec) {
  auto it = feature_cache_.find(rec.id);
  if (it != feature_cache_.end()) return it->second;
  const Mat f = analyzer_.logmel(corpus::load_wav(rec.audio_path)).data;
  feature_cache_.emplace(rec.id, f);
  return f;
}

std::vector<int> Trainer::targets_for(const UtteranceRecord& rec) {
  require(!rec.transcript.empty(),
          str_cat("trainer: record '", rec.id, "' has an empty transcript"));
  return tokenizer_.tokenize(rec.transcript);
}

SEBatch Trainer::se_batch_for(const UtteranceRecord& rec) {
  SEBatch b;
  auto cached = [&](const std::string& path) {
    auto it = wave_cache_.find(path);
    if (it == wave_cache_.end())
      it = wave_cache_.emplace(path, corpus::load_wav(path)).first;
    return it->second;
  };
  b.noisy = cached(rec.audio_path);
  b.is_real = rec.is_real;
  if (!rec.is_real) {
    require(rec.clean_path.has_value(),
            str_cat("trainer: simulated record '", rec.id,
                    "' lacks clean_path needed for the SE loss"));
    b.clean = cached(*rec.clean_path);
  }
  b.targets = targets_for(rec);
  return b;
}

Checkpoint Trainer::snapshot(asr::Model& model, bool trainable_only, long step,
                             int epoch, double dev_metric,
                             const std::string& backbone_hash) {
  Checkpoint c;
  c.meta.config_hash = model.config().signature();
  c.meta.step = step;
  c.meta.epoch = epoch;
  c.meta.dev_metric = dev_metric;
  c.meta.backbone_hash = backbone_hash;
  c.meta.component_tags.push_back(trainable_only ? "adapted" : "backbone");
  if (model.adapters()) {
    c.meta.component_tags.push_back("adapter");
    nlohmann::json spec;
    spec["positions"] = model.adapters()->spec().positions;
    spec["emb_dim"] = model.adapters()->spec().emb_dim;
    spec["in_out_dim"] = model.adapters()->spec().in_out_dim;
    c.meta.extra["adapter_spec"] = std::move(spec);
  }
  if (model.frontend())
    c.meta.component_tags.push_back(model.frontend()->component_tag());
  const auto params =
      trainable_only ? model.trainable_params() : model.all_params();
  for (const auto& [name, p] : params) c.params.emplace(name, p->value);
  return c;
}

double Trainer::dev_loss(asr::Model& model, enhancement::Frontend* frontend,
                         const TrainPlan& plan,
                         const std::vector<UtteranceRecord>& dev_records) {
  require(!dev_records.empty(), "trainer: empty dev set");
  double sum = 0.0;
  for (const auto& rec : dev_records) {
    if (plan.phase == Phase::adapt_with_se) {
      const auto b = se_batch_for(rec);
      sum += enhancement::joint_loss(b, model, *frontend, analyzer_,
                                     plan.lambda_se, plan.se_loss)
                 .asr_loss;
    } else {
      sum += model.compute_asr_loss(features_for(rec), targets_for(rec));
    }
  }
  return sum / static_cast<double>(dev_records.size());
}

Checkpoint Trainer::pretrain(asr::Model& model, const TrainPlan& plan,
                             const corpus::Manifest& manifest,
                             const std::string& run_dir) {
  require(plan.phase == Phase::pretrain, "pretrain: wrong plan phase");
  require(!plan.adapter_spec.has_value(),
          "pretrain: plan must not carry an adapter spec");
  require(model.adapters() == nullptr && !model.backbone_frozen(),
          "pretrain: model must be a fresh unfrozen backbone");
  auto train = manifest.split_records(corpus::Split::train);
  require(!train.empty(), "pretrain: manifest has no train records");
  return run_loop(model, nullptr, plan, std::move(train),
                  manifest.split_records(corpus::Split::dev), run_dir,
                  /*trainable_only=*/false, /*backbone_hash=*/"");
}

Checkpoint Trainer::adapt(asr::Model& model, enhancement::Frontend* frontend,
                          const TrainPlan& plan, const Checkpoint& pretrained,
                          const corpus::Manifest& manifest,
                          const std::string& run_dir) {
  require(plan.phase == Phase::adapt || plan.phase == Phase::adapt_with_se,
          "adapt: wrong plan phase");
  if (plan.phase == Phase::adapt_with_se) {
    // SE-only rows (front-end without adapters) are legal here.
    require(frontend != nullptr, "adapt_with_se: no front-end supplied");
  } else {
    require(plan.adapter_spec.has_value(), "adapt: plan needs an adapter spec");
    require(frontend == nullptr, "adapt: front-end only valid with "
                                 "phase adapt_with_se");
  }

  apply_backbone(pretrained, &model);
  model.freeze_backbone();
  if (plan.adapter_spec) model.insert_adapters(*plan.adapter_spec, plan.seed);
  if (frontend) model.attach_frontend(frontend);

  std::vector<std::pair<std::string, tape::Param*>> backbone_params;
  for (auto& [name, p] : model.params().map())
    backbone_params.emplace_back(name, &p);
  const std::string backbone_hash = param_content_hash(backbone_params);

  auto selected = corpus::select_regime(manifest, plan.regime);
  auto dev = manifest.split_records(corpus::Split::dev);
  if (plan.regime.held_out_condition) {
    // Held-out protocol: the paired dev condition is the held one.
    std::vector<UtteranceRecord> filtered;
    for (auto& r : dev)
      if (r.condition == *plan.regime.held_out_condition)
        filtered.push_back(std::move(r));
    dev = std::move(filtered);
  }
  return run_loop(model, frontend, plan, selected.split_records(corpus::Split::train),
                  dev, run_dir, /*trainable_only=*/true, backbone_hash);
}

Checkpoint Trainer::run_loop(asr::Model& model,
                             enhancement::Frontend* frontend,
                             const TrainPlan& plan,
                             std::vector<UtteranceRecord> train_records,
                             const std::vector<UtteranceRecord>& dev_records,
                             const std::string& run_dir, bool trainable_only,
                             const std::string& backbone_hash) {
  require(!train_records.empty(), "trainer: empty training set");
  std::filesystem::create_directories(run_dir);
  std::ofstream log_file(
      (std::filesystem::path(run_dir) / "train_log.jsonl").string());

  AdamOptimizer optimizer(plan.optim);
  CheckpointStore store((std::filesystem::path(run_dir) / "checkpoints").string());
  auto trainables = model.trainable_params();
  require(plan.epochs == 0 || !trainables.empty(),
          "trainer: nothing is trainable");

  long step = 0;
  for (int epoch = 1; epoch <= plan.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(plan.seed, {0x65706f63ULL, (uint64_t)epoch}));
    shuffle_rng.shuffle(&train_records);

    size_t batch_count = 0;
    for (auto& [name, p] : trainables) p->grad.set_zero();

    for (size_t idx = 0; idx < train_records.size(); ++idx) {
      const UtteranceRecord& rec = train_records[idx];
      TrainLogEntry entry;
      entry.epoch = epoch;

      Graph g;
      int total_node;
      if (plan.phase == Phase::adapt_with_se) {
        const auto nodes = enhancement::joint_loss_nodes(
            g, se_batch_for(rec), model, *frontend, analyzer_, plan.lambda_se,
            plan.se_loss);
        total_node = nodes.total;
        entry.asr_loss = g.value(nodes.asr)(0, 0);
        if (nodes.se >= 0) entry.se_loss = g.value(nodes.se)(0, 0);
      } else {
        Mat feats = features_for(rec);
        if (!plan.spec_aug.is_identity()) {
          features::FeatureMatrix fm;
          fm.data = std::move(feats);
          fm.kind = features::FeatureKind::logmel;
          auto policy = plan.spec_aug;
          policy.seed = derive_seed(plan.seed,
                                    {0x73610000ULL, (uint64_t)epoch, idx});
          feats = features::spec_augment(fm, policy).data;
        }
        total_node =
            model.asr_loss_node(g, g.leaf(std::move(feats)), targets_for(rec));
        entry.asr_loss = g.value(total_node)(0, 0);
      }

      const double total = g.value(total_node)(0, 0);
      if (!std::isfinite(total)) {
        throw std::runtime_error(
            str_cat("training aborted: non-finite loss at step ", step + 1,
                    " (epoch ", epoch, ", utterance '", rec.id, "')"));
      }
      g.backward(total_node);
      ++batch_count;

      entry.step = step + 1;
      entry.lr = optimizer.lr_at(step + 1);
      log_.push_back(entry);
      if (log_file) {
        nlohmann::json j;
        j["step"] = entry.step;
        j["epoch"] = entry.epoch;
        j["asr_loss"] = entry.asr_loss;
        if (entry.se_loss) j["se_loss"] = *entry.se_loss;
        j["lr"] = entry.lr;
        log_file << j.dump() << "\n";
      }

      const bool flush = batch_count == static_cast<size_t>(plan.batch_size) ||
                         idx + 1 == train_records.size();
      if (flush) {
        const double inv = 1.0 / static_cast<double>(batch_count);
        for (auto& [name, p] : trainables)
          for (size_t i = 0; i < p->grad.size(); ++i) p->grad.data()[i] *= inv;
        optimizer.step(trainables, ++step);
        for (auto& [name, p] : trainables) p->grad.set_zero();
        batch_count = 0;
      }
    }

    const double dev = dev_records.empty()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : dev_loss(model, frontend, plan, dev_records);
    require(dev_records.empty() || std::isfinite(dev),
            str_cat("training aborted: non-finite dev loss after epoch ",
                    epoch));
    store.add(snapshot(model, trainable_only, step, epoch,
                       dev_records.empty() ? 0.0 : dev, backbone_hash));
    store.prune_to_topk(plan.keep_topk);
  }

  Checkpoint final;
  const auto entries = store.entries();
  if (entries.empty()) {
    final = snapshot(model, trainable_only, step, 0, 0.0, backbone_hash);
  } else {
    const int k = std::min<int>(plan.keep_topk, entries.size());
    std::vector<Checkpoint> best;
    for (const auto& e : store.select_topk_by_dev(k))
      best.push_back(Checkpoint::load(e.path));
    final = average_checkpoints(best);
    // Leave the model holding the averaged weights.
    if (trainable_only) {
      apply_trainables(final, &model);
    } else {
      apply_backbone(final, &model);
    }
  }
  final.save((std::filesystem::path(run_dir) / "final.ckpt").string());
  return final;
}

}  // namespace adaptasr::training
