// enhancement/masknet.h

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

#ifndef ADAPTASR_ENHANCEMENT_MASKNET_H_
#define ADAPTASR_ENHANCEMENT_MASKNET_H_

#include <cstdint>

#include "enhancement/frontend.h"

namespace adaptasr::enhancement {

// Bi-LSTM magnitude-mask front-end: stacked bidirectional LSTM layers plus a
// fully connected layer producing a per-bin sigmoid mask in [0, 1] that
// multiplies the noisy magnitude spectrogram. Desk-scale hidden size is 128;
// the full-size preset uses 896.
struct MaskNetConfig {
  int num_layers = 2;
  int hidden = 128;
  int input_bins = 257;  // fft_size/2 + 1
};

class MaskNet : public Frontend {
 public:
  MaskNet(const MaskNetConfig& cfg, uint64_t seed);

  const MaskNetConfig& config() const { return cfg_; }
  tape::ParamStore& params() override { return params_; }
  const tape::ParamStore& params() const override { return params_; }
  std::string component_tag() const override { return "masknet"; }
  FrontendKind kind() const override { return FrontendKind::masknet; }

  // mask in [0,1]^{T x F} for a (T x F) magnitude node.
  int mask_node(tape::Graph& g, int noisy_magnitude);
  // enhanced = mask (elementwise) noisy.
  int forward_node(tape::Graph& g, int noisy_magnitude);

  // Eager surface: rejects non-magnitude inputs.
  features::FeatureMatrix forward(const features::FeatureMatrix& noisy);

  Forward forward(tape::Graph& g, int noisy_wave,
                  const features::Analyzer& an) override;
  int clean_reference(tape::Graph& g, int clean_wave,
                      const features::Analyzer& an) override;

 private:
  int bilstm_layer(tape::Graph& g, int x, int layer_index);
  int lstm_direction(tape::Graph& g, int x, const std::string& prefix,
                     bool backward);

  MaskNetConfig cfg_;
  tape::ParamStore params_;
};

}  // namespace adaptasr::enhancement

#endif  // ADAPTASR_ENHANCEMENT_MASKNET_H_
