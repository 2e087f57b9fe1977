// enhancement/joint.cc

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

#include "enhancement/joint.h"

#include "core/util.h"

namespace adaptasr::enhancement {

using tape::Graph;

int se_loss_node(Graph& g, int enhanced, int clean, SELossKind kind) {
  require(g.value(enhanced).same_shape(g.value(clean)),
          "se loss: enhanced/clean shape mismatch");
  return kind == SELossKind::l1 ? g.l1_loss(enhanced, clean)
                                : g.mse_loss(enhanced, clean);
}

double compute_se_loss(const Mat& enhanced, const Mat& clean,
                       SELossKind kind) {
  Graph g;
  return g.value(se_loss_node(g, g.constant(enhanced), g.constant(clean),
                              kind))(0, 0);
}

JointLossNodes joint_loss_nodes(Graph& g, const SEBatch& batch,
                                asr::Model& model, Frontend& frontend,
                                const features::Analyzer& an, double lambda,
                                SELossKind kind) {
  require(lambda >= 0.0, "joint loss: lambda must be nonnegative");
  require(!batch.noisy.empty(), "joint loss: empty noisy waveform");
  if (!batch.is_real) {
    require(batch.clean.has_value(),
            "joint loss: simulated batch is missing its clean reference");
  }

  const int noisy = g.constant(waveform_to_mat(batch.noisy));
  const Frontend::Forward fwd = frontend.forward(g, noisy, an);

  JointLossNodes nodes;
  nodes.asr = model.asr_loss_node(g, fwd.features, batch.targets);
  if (batch.is_real) {
    // Clean speech does not exist for real recordings; only the ASR loss
    // drives training.
    nodes.total = nodes.asr;
    return nodes;
  }
  const int clean_ref = frontend.clean_reference(
      g, g.constant(waveform_to_mat(*batch.clean)), an);
  nodes.se = se_loss_node(g, fwd.enhanced, clean_ref, kind);
  nodes.total = g.add(nodes.asr, g.scale(nodes.se, lambda));
  return nodes;
}

LossBreakdown joint_loss(const SEBatch& batch, asr::Model& model,
                         Frontend& frontend, const features::Analyzer& an,
                         double lambda, SELossKind kind) {
  Graph g;
  const JointLossNodes nodes =
      joint_loss_nodes(g, batch, model, frontend, an, lambda, kind);
  LossBreakdown out;
  out.asr_loss = g.value(nodes.asr)(0, 0);
  if (nodes.se >= 0) out.se_loss = g.value(nodes.se)(0, 0);
  out.total = g.value(nodes.total)(0, 0);
  return out;
}

}  // namespace adaptasr::enhancement
