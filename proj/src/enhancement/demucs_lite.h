// enhancement/demucs_lite.h

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

#ifndef ADAPTASR_ENHANCEMENT_DEMUCS_LITE_H_
#define ADAPTASR_ENHANCEMENT_DEMUCS_LITE_H_

#include <cstdint>

#include "enhancement/frontend.h"

namespace adaptasr::enhancement {

// Scaled-down waveform denoiser with the encoder/decoder/skip topology of
// the full-size network: strided conv encoder stages, transposed-conv
// decoder stages, additive skip connections, linear final layer. Channel
// width doubles per stage from `base_channels`. Input is zero-padded to the
// nearest valid length and the output trimmed back, so output length always
// equals input length.
struct DemucsConfig {
  int depth = 3;
  int base_channels = 8;
  int kernel = 8;
  int stride = 4;
};

class DemucsLite : public Frontend {
 public:
  DemucsLite(const DemucsConfig& cfg, uint64_t seed);

  const DemucsConfig& config() const { return cfg_; }
  tape::ParamStore& params() override { return params_; }
  const tape::ParamStore& params() const override { return params_; }
  std::string component_tag() const override { return "demucs_lite"; }
  FrontendKind kind() const override { return FrontendKind::demucs_lite; }

  // Smallest length >= n that survives every encoder stage exactly.
  int valid_length(int n) const;

  // (1 x N) waveform in, (1 x N) waveform out.
  int forward_node(tape::Graph& g, int wave);
  corpus::Waveform forward(const corpus::Waveform& wave);

  Forward forward(tape::Graph& g, int noisy_wave,
                  const features::Analyzer& an) override;
  int clean_reference(tape::Graph& g, int clean_wave,
                      const features::Analyzer& an) override;

 private:
  int channels_at(int stage) const;  // stage 0 -> 1 (mono), k -> base*2^(k-1)

  DemucsConfig cfg_;
  tape::ParamStore params_;
};

}  // namespace adaptasr::enhancement

#endif  // ADAPTASR_ENHANCEMENT_DEMUCS_LITE_H_
