// corpus/mixing.cc

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

#include "corpus/mixing.h"

#include <cmath>
#include <stdexcept>

#include "core/rng.h"
#include "core/util.h"

namespace adaptasr::corpus {

double mean_power(const Waveform& wave) {
  if (wave.empty()) return 0.0;
  double s = 0.0;
  for (double x : wave) s += x * x;
  return s / static_cast<double>(wave.size());
}

MixResult mix_at_snr(const Waveform& clean, const Waveform& noise,
                     double snr_db, uint64_t seed, NoiseOffsetPolicy policy) {
  require(!clean.empty(), "mix_at_snr: empty clean signal");
  require(!noise.empty(), "mix_at_snr: empty noise signal");
  require(std::isfinite(snr_db), "mix_at_snr: non-finite SNR");

  const size_t n = clean.size();
  // Tile the noise by whole copies until it covers the clean signal, then
  // draw the segment start.
  const size_t copies = (n + noise.size() - 1) / noise.size();
  const size_t tiled_len = std::max(noise.size(), copies * noise.size());
  size_t start = 0;
  if (policy == NoiseOffsetPolicy::random && tiled_len > n) {
    Rng rng(derive_seed(seed, {0x6d69780aULL}));
    start = static_cast<size_t>(rng.uniform_int(tiled_len - n + 1));
  }

  Waveform segment(n);
  for (size_t i = 0; i < n; ++i) segment[i] = noise[(start + i) % noise.size()];

  const double p_clean = mean_power(clean);
  const double p_noise = mean_power(segment);
  if (p_clean <= 0.0)
    throw std::domain_error("mix_at_snr: clean signal has zero power");
  if (p_noise <= 0.0)
    throw std::domain_error("mix_at_snr: noise segment has zero power");

  const double gain =
      std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));

  MixResult r;
  r.gain = gain;
  r.noise_segment = std::move(segment);
  r.noisy.resize(n);
  for (size_t i = 0; i < n; ++i)
    r.noisy[i] = clean[i] + gain * r.noise_segment[i];
  return r;
}

double measure_snr(const Waveform& signal, const Waveform& noise_component) {
  require(signal.size() == noise_component.size(),
          "measure_snr: length mismatch");
  const double p_s = mean_power(signal);
  const double p_n = mean_power(noise_component);
  if (p_s <= 0.0)
    throw std::domain_error("measure_snr: signal has zero power");
  if (p_n <= 0.0)
    throw std::domain_error("measure_snr: noise component has zero power");
  return 10.0 * std::log10(p_s / p_n);
}

}  // namespace adaptasr::corpus
