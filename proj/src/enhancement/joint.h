// enhancement/joint.h

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

#ifndef ADAPTASR_ENHANCEMENT_JOINT_H_
#define ADAPTASR_ENHANCEMENT_JOINT_H_

#include <optional>

#include "asr/model.h"
#include "enhancement/frontend.h"

namespace adaptasr::enhancement {

enum class SELossKind { l1, l2 };

// One utterance entering joint training. Real recordings carry no clean
// reference, so the SE loss cannot be computed for them.
struct SEBatch {
  corpus::Waveform noisy;
  std::optional<corpus::Waveform> clean;
  bool is_real = false;
  std::vector<int> targets;
};

struct LossBreakdown {
  double asr_loss = 0.0;
  std::optional<double> se_loss;
  double total = 0.0;
};

struct JointLossNodes {
  int total = -1;
  int asr = -1;
  int se = -1;  // -1 when the batch is real
};

// SE loss between matching-domain nodes, mean per element.
int se_loss_node(tape::Graph& g, int enhanced, int clean, SELossKind kind);
double compute_se_loss(const Mat& enhanced, const Mat& clean, SELossKind kind);

// Builds the asymmetric joint objective on one tape:
//   real batch:       total = L_ASR on enhanced features (no L_SE exists)
//   simulated batch:  total = L_ASR + lambda * L_SE
// Throws if a simulated batch is missing its clean reference.
JointLossNodes joint_loss_nodes(tape::Graph& g, const SEBatch& batch,
                                asr::Model& model, Frontend& frontend,
                                const features::Analyzer& an, double lambda,
                                SELossKind kind = SELossKind::l1);

LossBreakdown joint_loss(const SEBatch& batch, asr::Model& model,
                         Frontend& frontend, const features::Analyzer& an,
                         double lambda, SELossKind kind = SELossKind::l1);

}  // namespace adaptasr::enhancement

#endif  // ADAPTASR_ENHANCEMENT_JOINT_H_
