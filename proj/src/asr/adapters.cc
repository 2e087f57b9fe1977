// asr/adapters.cc

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

#include "asr/adapters.h"

#include "core/util.h"

namespace adaptasr::asr {

void AdapterSpec::validate(int num_encoder_layers) const {
  require(!positions.empty(), "AdapterSpec: positions must be nonempty");
  for (size_t i = 0; i < positions.size(); ++i) {
    const int p = positions[i];
    require(p >= 1 && p <= num_encoder_layers,
            str_cat("AdapterSpec: position ", p, " outside [1, ",
                    num_encoder_layers, "]"));
    for (size_t j = i + 1; j < positions.size(); ++j)
      require(positions[j] != p,
              str_cat("AdapterSpec: duplicate position ", p));
  }
  require(emb_dim > 0, "AdapterSpec: emb_dim must be positive");
  require(in_out_dim > 0, "AdapterSpec: in_out_dim must be positive");
  require(emb_dim < in_out_dim,
          str_cat("AdapterSpec: central dimension ", emb_dim,
                  " must be smaller than the in/out dimension ", in_out_dim));
}

AdapterBank::AdapterBank(const AdapterSpec& spec, uint64_t seed) : spec_(spec) {
  Rng rng(derive_seed(seed, {0x61646170ULL}));
  const int d = spec_.in_out_dim, m = spec_.emb_dim;
  for (int pos : spec_.positions) {
    const std::string prefix = str_cat("adapter.l", pos, ".");
    // Down projection gets a small Gaussian; the up projection starts at
    // exactly zero so the adapted model is the identity at initialization.
    tape::normal_init(&params_.create(prefix + "w_down", d, m).value, 0.02,
                      &rng);
    params_.create(prefix + "b_down", 1, m);
    params_.create(prefix + "w_up", m, d);
    params_.create(prefix + "b_up", 1, d);
  }
}

int adapter_forward(tape::Graph& g, int e, int w_down, int b_down, int w_up,
                    int b_up, AdapterActivation act) {
  require(g.value(e).cols() == g.value(w_down).rows(),
          "adapter_forward: input width does not match W_down");
  const int hidden = g.add_row(g.matmul(e, w_down), b_down);
  const int activated =
      act == AdapterActivation::relu ? g.relu(hidden) : g.swish(hidden);
  const int branch = g.add_row(g.matmul(activated, w_up), b_up);
  return g.add(e, branch);
}

int AdapterBank::forward(tape::Graph& g, int e, int layer) {
  const std::string prefix = str_cat("adapter.l", layer, ".");
  return adapter_forward(g, e, g.param(params_.at(prefix + "w_down")),
                         g.param(params_.at(prefix + "b_down")),
                         g.param(params_.at(prefix + "w_up")),
                         g.param(params_.at(prefix + "b_up")),
                         spec_.activation);
}

}  // namespace adaptasr::asr
