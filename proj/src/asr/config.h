// asr/config.h

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

#ifndef ADAPTASR_ASR_CONFIG_H_
#define ADAPTASR_ASR_CONFIG_H_

#include <string>

#include "core/util.h"

namespace adaptasr::asr {

enum class PosEncoding { relative, absolute };

// Backbone hyperparameters. The default is the desk-scale preset: the layer
// counts of the full-size recipe with attention width cut to 128 so the
// model trains on a CPU.
struct ModelConfig {
  int num_encoder_layers = 6;
  int num_decoder_layers = 6;
  int attn_dim = 128;
  int attn_heads = 4;
  int ff_units = 512;
  int subsample_rate = 4;  // realized by two stride-2 convolutions
  int vocab_size = 0;      // set from the tokenizer
  PosEncoding pos_encoding = PosEncoding::relative;

  int conv_channels = 32;    // subsampling conv width
  int depthwise_kernel = 7;  // conformer convolution module
  double label_smoothing = 0.1;
  int num_mels = 80;

  void validate() const {
    require(num_encoder_layers > 0 && num_decoder_layers > 0,
            "ModelConfig: layer counts must be positive");
    require(attn_heads > 0 && attn_dim % attn_heads == 0,
            "ModelConfig: attn_dim must be divisible by attn_heads");
    require(subsample_rate == 4,
            "ModelConfig: subsample_rate 4 (two stride-2 convs) is the only "
            "supported rate");
    require(vocab_size > 3, "ModelConfig: vocab_size must cover reserved ids");
    require(depthwise_kernel % 2 == 1,
            "ModelConfig: depthwise kernel must be odd");
    require(attn_dim % 2 == 0, "ModelConfig: attn_dim must be even");
  }

  // Structural signature used for checkpoint compatibility checks.
  std::string signature() const {
    return str_cat("enc", num_encoder_layers, ".dec", num_decoder_layers,
                   ".d", attn_dim, ".h", attn_heads, ".ff", ff_units, ".sub",
                   subsample_rate, ".v", vocab_size, ".pos",
                   pos_encoding == PosEncoding::relative ? "rel" : "abs",
                   ".cc", conv_channels, ".dw", depthwise_kernel, ".mel",
                   num_mels);
  }

  // Each subsampling conv uses kernel 4, stride 2, padding 1, so one stage
  // maps an axis of length n to floor(n/2).
  static int conv_stage_out(int n) { return n / 2; }
  int subsampled_len(int t_in) const {
    return conv_stage_out(conv_stage_out(t_in));
  }
  int subsampled_freq() const {
    return conv_stage_out(conv_stage_out(num_mels));
  }
};

}  // namespace adaptasr::asr

#endif  // ADAPTASR_ASR_CONFIG_H_
