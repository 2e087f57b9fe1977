// enhancement/demucs_lite.cc

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

#include "enhancement/demucs_lite.h"

#include "core/util.h"

namespace adaptasr::enhancement {

using tape::Graph;

DemucsLite::DemucsLite(const DemucsConfig& cfg, uint64_t seed) : cfg_(cfg) {
  require(cfg_.depth >= 1 && cfg_.base_channels >= 1 && cfg_.kernel >= 1 &&
              cfg_.stride >= 1,
          "DemucsLite: bad configuration");
  Rng rng(derive_seed(seed, {0x64656d75ULL}));
  for (int k = 1; k <= cfg_.depth; ++k) {
    const int cin = channels_at(k - 1), cout = channels_at(k);
    tape::glorot_uniform_init(
        &params_.create(str_cat("se.demucs.enc", k, ".w"), cout,
                        cin * cfg_.kernel)
             .value,
        &rng);
    params_.create(str_cat("se.demucs.enc", k, ".b"), 1, cout);
    // Decoder stage k maps channels_at(k) back to channels_at(k-1).
    tape::glorot_uniform_init(
        &params_.create(str_cat("se.demucs.dec", k, ".w"), cout,
                        cin * cfg_.kernel)
             .value,
        &rng);
    params_.create(str_cat("se.demucs.dec", k, ".b"), 1, cin);
  }
}

int DemucsLite::channels_at(int stage) const {
  if (stage == 0) return 1;
  int c = cfg_.base_channels;
  for (int i = 1; i < stage; ++i) c *= 2;
  return c;
}

int DemucsLite::valid_length(int n) const {
  for (int len = std::max(n, cfg_.kernel);; ++len) {
    int l = len;
    bool ok = true;
    for (int k = 0; k < cfg_.depth; ++k) {
      if (l < cfg_.kernel || (l - cfg_.kernel) % cfg_.stride != 0) {
        ok = false;
        break;
      }
      l = (l - cfg_.kernel) / cfg_.stride + 1;
    }
    if (ok) return len;
  }
}

int DemucsLite::forward_node(Graph& g, int wave) {
  require(g.value(wave).rows() == 1, "demucs_lite: expects a 1 x N waveform");
  const int n = g.value(wave).cols();
  require(n >= 1, "demucs_lite: empty waveform");
  const int padded_len = valid_length(n);

  int x = padded_len == n ? wave : g.pad_cols(wave, 0, padded_len - n);

  std::vector<int> skips;   // encoder outputs, stage 1..depth-1
  std::vector<int> lengths;  // length entering each stage
  int len = padded_len;
  for (int k = 1; k <= cfg_.depth; ++k) {
    lengths.push_back(len);
    x = g.relu(g.conv1d(x, g.param(params_.at(str_cat("se.demucs.enc", k, ".w"))),
                        g.param(params_.at(str_cat("se.demucs.enc", k, ".b"))),
                        channels_at(k - 1), len, channels_at(k), cfg_.kernel,
                        cfg_.stride, 0));
    len = (len - cfg_.kernel) / cfg_.stride + 1;
    if (k < cfg_.depth) skips.push_back(x);
  }

  for (int k = cfg_.depth; k >= 1; --k) {
    const int up = g.conv1d_transpose(
        x, g.param(params_.at(str_cat("se.demucs.dec", k, ".w"))),
        g.param(params_.at(str_cat("se.demucs.dec", k, ".b"))), channels_at(k),
        len, channels_at(k - 1), cfg_.kernel, cfg_.stride);
    len = lengths[k - 1];
    if (k > 1) {
      x = g.add(g.relu(up), skips[k - 2]);
    } else {
      x = up;  // final stage stays linear
    }
  }
  return padded_len == n ? x : g.slice_cols(x, 0, n);
}

corpus::Waveform DemucsLite::forward(const corpus::Waveform& wave) {
  Graph g;
  const int out = forward_node(g, g.constant(waveform_to_mat(wave)));
  const Mat& m = g.value(out);
  return corpus::Waveform(m.data(), m.data() + m.size());
}

Frontend::Forward DemucsLite::forward(Graph& g, int noisy_wave,
                                      const features::Analyzer& an) {
  Forward out;
  out.enhanced = forward_node(g, noisy_wave);
  out.features = an.logmel_from_power(g, an.power_node(g, out.enhanced));
  return out;
}

int DemucsLite::clean_reference(Graph& g, int clean_wave,
                                const features::Analyzer& an) {
  (void)an;
  return clean_wave;
}

}  // namespace adaptasr::enhancement
