// enhancement/masknet.cc

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

#include "enhancement/masknet.h"

#include "core/util.h"

namespace adaptasr::enhancement {

using tape::Graph;

MaskNet::MaskNet(const MaskNetConfig& cfg, uint64_t seed) : cfg_(cfg) {
  require(cfg_.num_layers >= 1 && cfg_.hidden >= 1 && cfg_.input_bins >= 1,
          "MaskNet: bad configuration");
  Rng rng(derive_seed(seed, {0x6d61736bULL}));
  const int h = cfg_.hidden;
  for (int l = 1; l <= cfg_.num_layers; ++l) {
    const int in = l == 1 ? cfg_.input_bins : 2 * h;
    for (const char* dir : {"fwd", "bwd"}) {
      const std::string p = str_cat("se.masknet.l", l, ".", dir, ".");
      tape::glorot_uniform_init(&params_.create(p + "wx", in, 4 * h).value,
                                &rng);
      tape::glorot_uniform_init(&params_.create(p + "wh", h, 4 * h).value,
                                &rng);
      tape::Param& b = params_.create(p + "b", 1, 4 * h);
      // Forget-gate bias starts at one.
      for (int i = h; i < 2 * h; ++i) b.value.data()[i] = 1.0;
    }
  }
  tape::glorot_uniform_init(
      &params_.create("se.masknet.fc.w", 2 * h, cfg_.input_bins).value, &rng);
  params_.create("se.masknet.fc.b", 1, cfg_.input_bins);
}

int MaskNet::lstm_direction(Graph& g, int x, const std::string& prefix,
                            bool backward) {
  const int t = g.value(x).rows();
  const int h = cfg_.hidden;
  const int gates_x = g.matmul(x, g.param(params_.at(prefix + "wx")));
  const int wh = g.param(params_.at(prefix + "wh"));
  const int b = g.param(params_.at(prefix + "b"));

  int h_prev = g.constant(Mat(1, h));
  int c_prev = g.constant(Mat(1, h));
  std::vector<int> outputs(t);
  for (int step = 0; step < t; ++step) {
    const int tt = backward ? t - 1 - step : step;
    const int gates = g.add(
        g.add(g.slice_rows(gates_x, tt, tt + 1), g.matmul(h_prev, wh)), b);
    const int gi = g.sigmoid(g.slice_cols(gates, 0, h));
    const int gf = g.sigmoid(g.slice_cols(gates, h, 2 * h));
    const int gg = g.tanh_act(g.slice_cols(gates, 2 * h, 3 * h));
    const int go = g.sigmoid(g.slice_cols(gates, 3 * h, 4 * h));
    c_prev = g.add(g.mul(gf, c_prev), g.mul(gi, gg));
    h_prev = g.mul(go, g.tanh_act(c_prev));
    outputs[tt] = h_prev;
  }
  return g.concat_rows(outputs);
}

int MaskNet::bilstm_layer(Graph& g, int x, int layer_index) {
  const std::string p = str_cat("se.masknet.l", layer_index, ".");
  const int fwd = lstm_direction(g, x, p + "fwd.", false);
  const int bwd = lstm_direction(g, x, p + "bwd.", true);
  return g.concat_cols({fwd, bwd});
}

int MaskNet::mask_node(Graph& g, int noisy_magnitude) {
  require(g.value(noisy_magnitude).cols() == cfg_.input_bins,
          str_cat("masknet: expected ", cfg_.input_bins, " bins, got ",
                  g.value(noisy_magnitude).cols()));
  int x = noisy_magnitude;
  for (int l = 1; l <= cfg_.num_layers; ++l) x = bilstm_layer(g, x, l);
  const int logits = g.add_row(g.matmul(x, g.param(params_.at("se.masknet.fc.w"))),
                               g.param(params_.at("se.masknet.fc.b")));
  return g.sigmoid(logits);
}

int MaskNet::forward_node(Graph& g, int noisy_magnitude) {
  return g.mul(mask_node(g, noisy_magnitude), noisy_magnitude);
}

features::FeatureMatrix MaskNet::forward(const features::FeatureMatrix& noisy) {
  require(noisy.kind == features::FeatureKind::magnitude,
          "masknet: input features must be a magnitude spectrogram");
  Graph g;
  const int out = forward_node(g, g.constant(noisy.data));
  features::FeatureMatrix enhanced;
  enhanced.kind = features::FeatureKind::magnitude;
  enhanced.frame_shift_ms = noisy.frame_shift_ms;
  enhanced.data = g.value(out);
  return enhanced;
}

Frontend::Forward MaskNet::forward(Graph& g, int noisy_wave,
                                   const features::Analyzer& an) {
  const int magnitude =
      an.magnitude_from_power(g, an.power_node(g, noisy_wave));
  Forward out;
  out.enhanced = forward_node(g, magnitude);
  out.features = an.logmel_from_magnitude(g, out.enhanced);
  return out;
}

int MaskNet::clean_reference(Graph& g, int clean_wave,
                             const features::Analyzer& an) {
  return an.magnitude_from_power(g, an.power_node(g, clean_wave));
}

}  // namespace adaptasr::enhancement
