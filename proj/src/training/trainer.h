// training/trainer.h

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

#ifndef ADAPTASR_TRAINING_TRAINER_H_
#define ADAPTASR_TRAINING_TRAINER_H_

#include <optional>
#include <string>
#include <vector>

#include "asr/model.h"
#include "corpus/manifest.h"
#include "corpus/regime.h"
#include "enhancement/joint.h"
#include "features/specaug.h"
#include "features/tokenizer.h"
#include "training/checkpoint.h"
#include "training/optimizer.h"

namespace adaptasr::training {

enum class Phase { pretrain, adapt, adapt_with_se };

std::string phase_name(Phase p);

struct TrainPlan {
  Phase phase = Phase::pretrain;
  int epochs = 10;
  int batch_size = 4;
  OptimConfig optim;
  uint64_t seed = 0;
  corpus::DataRegime regime;         // applied in the adapt phases
  features::SpecAugPolicy spec_aug;  // identity policy disables augmentation
  std::optional<asr::AdapterSpec> adapter_spec;
  int keep_topk = 5;
  double lambda_se = 1.0;
  enhancement::SELossKind se_loss = enhancement::SELossKind::l1;
};

struct TrainLogEntry {
  long step = 0;
  int epoch = 0;
  double asr_loss = 0.0;
  std::optional<double> se_loss;
  double lr = 0.0;
};

// Content hash over parameter names and raw values (FNV-1a); identifies the
// frozen backbone an adapted checkpoint belongs to.
std::string param_content_hash(
    const std::vector<std::pair<std::string, tape::Param*>>& params);

// Copies checkpoint parameters into the model backbone. Requires a config
// hash match and full name coverage.
void apply_backbone(const Checkpoint& ckpt, asr::Model* model);
// Copies adapter/front-end parameters of an adapted checkpoint into the
// corresponding attached stores.
void apply_trainables(const Checkpoint& ckpt, asr::Model* model);

// Training loops. The loop is the sole writer to model parameters; OpenMP
// parallelism lives inside the kernels, so results are bit-identical for
// any worker count. Runs are deterministic given (plan.seed, inputs).
class Trainer {
 public:
  Trainer(const features::Analyzer& an, const features::Tokenizer& tok)
      : analyzer_(an), tokenizer_(tok) {}

  // Trains every backbone parameter from scratch on the manifest train
  // split, tracks per-epoch dev loss, keeps the top-k checkpoints in
  // run_dir, and returns their average (also saved as final.ckpt).
  Checkpoint pretrain(asr::Model& model, const TrainPlan& plan,
                      const corpus::Manifest& manifest,
                      const std::string& run_dir);

  // Loads the backbone from `pretrained`, freezes it, inserts adapters per
  // plan, optionally attaches `frontend` (adapt_with_se), trains on the
  // regime-selected data, and returns a checkpoint holding only the
  // trainable components plus the frozen backbone hash.
  Checkpoint adapt(asr::Model& model, enhancement::Frontend* frontend,
                   const TrainPlan& plan, const Checkpoint& pretrained,
                   const corpus::Manifest& manifest,
                   const std::string& run_dir);

  const std::vector<TrainLogEntry>& log() const { return log_; }

 private:
  Checkpoint run_loop(asr::Model& model, enhancement::Frontend* frontend,
                      const TrainPlan& plan,
                      std::vector<corpus::UtteranceRecord> train_records,
                      const std::vector<corpus::UtteranceRecord>& dev_records,
                      const std::string& run_dir, bool trainable_only,
                      const std::string& backbone_hash);
  double dev_loss(asr::Model& model, enhancement::Frontend* frontend,
                  const TrainPlan& plan,
                  const std::vector<corpus::UtteranceRecord>& dev_records);
  Mat features_for(const corpus::UtteranceRecord& rec);
  std::vector<int> targets_for(const corpus::UtteranceRecord& rec);
  enhancement::SEBatch se_batch_for(const corpus::UtteranceRecord& rec);
  Checkpoint snapshot(asr::Model& model, bool trainable_only, long step,
                      int epoch, double dev_metric,
                      const std::string& backbone_hash);

  const features::Analyzer& analyzer_;
  const features::Tokenizer& tokenizer_;
  std::vector<TrainLogEntry> log_;
  std::map<std::string, Mat> feature_cache_;
  std::map<std::string, corpus::Waveform> wave_cache_;
};

}  // namespace adaptasr::training

#endif  // ADAPTASR_TRAINING_TRAINER_H_
