// eval/ablation.h

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

#ifndef ADAPTASR_EVAL_ABLATION_H_
#define ADAPTASR_EVAL_ABLATION_H_

#include <optional>

#include "enhancement/demucs_lite.h"
#include "enhancement/masknet.h"
#include "eval/evaluate.h"
#include "training/trainer.h"

namespace adaptasr::eval {

enum class AblationAxis { position, emb_dim, data_regime, se_system };

std::string axis_name(AblationAxis a);
AblationAxis parse_axis(const std::string& s);

// One grid point: what to train and how to score it. Points with
// `per_condition_held` set expand into one adapt run per condition, each
// trained and scored on that single condition.
struct GridPoint {
  std::string exp_id;
  std::string label;
  std::optional<asr::AdapterSpec> adapter_spec;
  corpus::DataRegime regime;
  bool per_condition_held = false;
  std::optional<enhancement::FrontendKind> frontend;
};

struct AblationGridConfig {
  AblationAxis axis = AblationAxis::position;
  asr::ModelConfig model;
  training::TrainPlan plan;  // template; per-point fields are overwritten
  enhancement::MaskNetConfig masknet;
  enhancement::DemucsConfig demucs;
  std::vector<int> default_positions;  // usually all encoder layers
  int default_emb_dim = 16;
  // Desk-scale record counts mirroring the full-size 400/200/100 ladder.
  std::vector<int> regime_counts{40, 20, 10};
};

// The grid points of each axis, mirroring the published table layouts:
// position (11 rows), emb_dim (5 rows, the full-size sweep scaled by
// attn_dim/512), data_regime (full/real-only plus the held-out ladder and
// the multi-condition row), se_system (4 rows).
std::vector<GridPoint> make_grid(const AblationGridConfig& cfg,
                                 const corpus::Manifest& manifest);

// Runs adapt + evaluate for every grid point with a fixed per-point seed.
// Rows are independent and resumable (cached under run_dir/rows); a failing
// row is recorded and the remaining rows still run.
AblationReport run_ablation(const AblationGridConfig& cfg,
                            const training::Checkpoint& backbone,
                            const corpus::Manifest& manifest,
                            const features::Analyzer& an,
                            const features::Tokenizer& tok,
                            const std::string& run_dir);

}  // namespace adaptasr::eval

#endif  // ADAPTASR_EVAL_ABLATION_H_
