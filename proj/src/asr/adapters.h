// asr/adapters.h

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

#ifndef ADAPTASR_ASR_ADAPTERS_H_
#define ADAPTASR_ASR_ADAPTERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tape/params.h"

namespace adaptasr::asr {

enum class AdapterInit { lora_zero_up };
enum class AdapterActivation { relu, swish };

// Residual bottleneck adapter description: which encoder layers get one,
// and the bottleneck shape. The central dimension must be strictly smaller
// than the layer width.
struct AdapterSpec {
  std::vector<int> positions;  // 1-based encoder layer indices
  int emb_dim = 0;             // bottleneck width m
  int in_out_dim = 0;          // layer width d
  AdapterInit init = AdapterInit::lora_zero_up;
  AdapterActivation activation = AdapterActivation::relu;

  void validate(int num_encoder_layers) const;
  // Trainable parameters of one adapter: 2*d*m + m + d.
  long params_per_adapter() const {
    return 2L * in_out_dim * emb_dim + emb_dim + in_out_dim;
  }
};

// The per-position adapter parameters, owned alongside the model backbone
// but kept in a separate store so freezing and checkpointing can treat them
// as a unit.
class AdapterBank : public tape::TrainableComponent {
 public:
  AdapterBank(const AdapterSpec& spec, uint64_t seed);

  const AdapterSpec& spec() const { return spec_; }
  tape::ParamStore& params() override { return params_; }
  const tape::ParamStore& params() const override { return params_; }
  std::string component_tag() const override { return "adapter"; }

  bool has_position(int layer) const {
    for (int p : spec_.positions)
      if (p == layer) return true;
    return false;
  }

  // Applies e' = e + act(e W_down + b_down) W_up + b_up at `layer`.
  int forward(tape::Graph& g, int e, int layer);

 private:
  AdapterSpec spec_;
  tape::ParamStore params_;
};

// Free-standing Eq.-style adapter application for a single parameter set;
// used directly by tests and by AdapterBank.
int adapter_forward(tape::Graph& g, int e, int w_down, int b_down, int w_up,
                    int b_up, AdapterActivation act);

}  // namespace adaptasr::asr

#endif  // ADAPTASR_ASR_ADAPTERS_H_
