// cli/run_config.h

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

#ifndef ADAPTASR_CLI_RUN_CONFIG_H_
#define ADAPTASR_CLI_RUN_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "asr/config.h"
#include "corpus/mixing.h"
#include "corpus/regime.h"
#include "enhancement/demucs_lite.h"
#include "enhancement/masknet.h"
#include "features/features.h"
#include "features/specaug.h"
#include "json.hpp"
#include "training/trainer.h"

namespace adaptasr::cli {

// The single source of truth for a run. Every field is defaulted except the
// mandatory seed; unknown keys anywhere in the file are rejected. The config
// hash is the digest of the canonicalized (fully defaulted, key-sorted)
// JSON, so semantically identical files hash identically.
struct RunConfig {
  uint64_t seed = 0;

  // corpus
  std::vector<std::string> conditions{"bus", "caf", "ped", "str"};
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
  corpus::NoiseOffsetPolicy offset_policy = corpus::NoiseOffsetPolicy::random;
  int mixes_per_clean = 1;

  // features
  features::FeatureConfig features;
  features::SpecAugPolicy spec_aug;  // per-utterance seeds derived at use

  // model ("auto" vocab resolves from the tokenizer at run time)
  asr::ModelConfig model;

  // adapter
  std::vector<int> adapter_positions{1, 2, 3, 4, 5, 6};
  int adapter_emb_dim = 16;
  std::string adapter_activation = "relu";

  // frontend
  std::string frontend_type = "none";  // none | masknet | demucs_lite
  enhancement::MaskNetConfig masknet;
  enhancement::DemucsConfig demucs;
  double lambda_se = 1.0;
  std::string se_loss = "l1";

  // train
  int pretrain_epochs = 30;
  int adapt_epochs = 20;
  int batch_size = 4;
  int keep_topk = 5;
  training::OptimConfig optim;

  // regime (adapt phases)
  corpus::DataRegime regime;

  // eval / ablation
  std::string eval_split = "dev";
  std::vector<int> regime_counts{40, 20, 10};

  static RunConfig load(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;  // fully defaulted, canonical
  std::string hash() const;        // 16 hex chars

  asr::AdapterSpec adapter_spec() const;
  training::TrainPlan pretrain_plan() const;
  training::TrainPlan adapt_plan() const;
  enhancement::SELossKind se_loss_kind() const;
};

}  // namespace adaptasr::cli

#endif  // ADAPTASR_CLI_RUN_CONFIG_H_
