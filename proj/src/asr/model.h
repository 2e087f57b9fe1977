// asr/model.h

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

#ifndef ADAPTASR_ASR_MODEL_H_
#define ADAPTASR_ASR_MODEL_H_

#include <memory>
#include <string>
#include <vector>

#include "asr/adapters.h"
#include "asr/config.h"
#include "tape/params.h"

namespace adaptasr::asr {

// Hidden-state sequence after each encoder layer (with any adapter applied),
// each T' x attn_dim.
struct EncoderTrace {
  std::vector<Mat> layers;
  int t_prime = 0;
};

// Conformer encoder + Transformer decoder with per-layer adapter hook points.
// A model instance is single-writer during training; forward passes are pure
// given the parameter values.
class Model : public tape::TrainableComponent {
 public:
  Model(const ModelConfig& cfg, uint64_t seed);

  const ModelConfig& config() const { return cfg_; }

  // Backbone parameter store (encoder + decoder).
  tape::ParamStore& params() override { return backbone_; }
  const tape::ParamStore& params() const override { return backbone_; }
  std::string component_tag() const override { return "backbone"; }

  // Registers one independent adapter per listed position. Fails on
  // out-of-range or duplicate positions or on a width mismatch.
  void insert_adapters(const AdapterSpec& spec, uint64_t seed);
  AdapterBank* adapters() { return adapters_.get(); }
  const AdapterBank* adapters() const { return adapters_.get(); }

  // Marks every backbone parameter non-trainable. Adapters and any attached
  // front-end stay trainable.
  void freeze_backbone();
  bool backbone_frozen() const { return frozen_; }

  void attach_frontend(tape::TrainableComponent* frontend) {
    frontend_ = frontend;
  }
  tape::TrainableComponent* frontend() { return frontend_; }

  // Exact number of scalar parameters that receive gradient updates, over
  // backbone, adapters and attached front-end.
  long count_trainable_params() const;
  // All parameters of all attached components, for optimizers/checkpoints.
  std::vector<std::pair<std::string, tape::Param*>> all_params();
  std::vector<std::pair<std::string, tape::Param*>> trainable_params();

  // feats is a (T x num_mels) logmel node. Returns the final encoder output
  // node (T' x attn_dim); optionally records the per-layer trace.
  int encoder_forward(tape::Graph& g, int feats,
                      EncoderTrace* trace = nullptr);

  // Teacher-forced decoder logits over `tgt_in` given encoder memory.
  int decoder_logits(tape::Graph& g, int memory,
                     const std::vector<int>& tgt_in);

  // Label-smoothed attention CE over the target sequence (mean per token).
  int asr_loss_node(tape::Graph& g, int feats, const std::vector<int>& targets);
  double compute_asr_loss(const Mat& feats, const std::vector<int>& targets);

  // Autoregressive argmax decode from <sos> until <sos/eos> or 2*T' tokens.
  std::vector<int> decode_greedy(const Mat& feats);

 private:
  int conformer_layer(tape::Graph& g, int x, int layer);
  int conv_module(tape::Graph& g, int x, const std::string& prefix);
  int feed_forward(tape::Graph& g, int x, const std::string& prefix,
                   bool use_swish);
  int norm(tape::Graph& g, int x, const std::string& prefix);
  int linear(tape::Graph& g, int x, const std::string& w_name,
             const std::string& b_name);
  // Multi-head attention. If `relative` is true, q/kv must be the same
  // length and transformer-XL style relative position terms are added.
  int attention(tape::Graph& g, int q_in, int kv_in, const std::string& prefix,
                const Mat* mask, bool relative);

  ModelConfig cfg_;
  tape::ParamStore backbone_;
  std::unique_ptr<AdapterBank> adapters_;
  tape::TrainableComponent* frontend_ = nullptr;
  bool frozen_ = false;
};

// Sinusoidal position tables.
Mat absolute_positions(int len, int dim);
// Rows m = 0..2t-2 hold the embedding of relative position t-1-m.
Mat relative_positions(int t, int dim);

}  // namespace adaptasr::asr

#endif  // ADAPTASR_ASR_MODEL_H_
