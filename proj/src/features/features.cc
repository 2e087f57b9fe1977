// features/features.cc

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

#include "features/features.h"

#include <cmath>
#include <numbers>

#include "core/util.h"
#include "kernels/kernels.h"

namespace adaptasr::features {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Analyzer::Analyzer(const FeatureConfig& cfg) : cfg_(cfg) {
  const int win = cfg_.win_length, nfft = cfg_.fft_size, bins = num_bins();
  require(win <= nfft, "Analyzer: window longer than FFT size");

  hann_ = Mat(1, win);
  for (int i = 0; i < win; ++i) {
    hann_.data()[i] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win);
  }

  // Real DFT bases over the (zero-padded) window.
  dft_cos_ = Mat(win, bins);
  dft_sin_ = Mat(win, bins);
  for (int i = 0; i < win; ++i) {
    for (int b = 0; b < bins; ++b) {
      const double ang = 2.0 * std::numbers::pi * i * b / nfft;
      dft_cos_(i, b) = std::cos(ang);
      dft_sin_(i, b) = -std::sin(ang);
    }
  }

  // Triangular mel filters over FFT bin center frequencies.
  mel_w_ = Mat(bins, cfg_.num_mels);
  const double mel_lo = hz_to_mel(cfg_.fmin_hz);
  const double mel_hi = hz_to_mel(cfg_.fmax_hz);
  std::vector<double> edges(cfg_.num_mels + 2);
  for (int m = 0; m < cfg_.num_mels + 2; ++m) {
    edges[m] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * m / (cfg_.num_mels + 1));
  }
  for (int b = 0; b < bins; ++b) {
    const double f = static_cast<double>(b) * corpus::kSampleRate / nfft;
    for (int m = 0; m < cfg_.num_mels; ++m) {
      const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
      double w = 0.0;
      if (f > lo && f < hi)
        w = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
      mel_w_(b, m) = w;
    }
  }
}

int Analyzer::num_frames(int num_samples) const {
  require(num_samples >= cfg_.win_length,
          str_cat("features: waveform of ", num_samples,
                  " samples is shorter than one ", cfg_.win_length,
                  "-sample window"));
  return 1 + (num_samples - cfg_.win_length) / cfg_.hop_length;
}

Mat Analyzer::power_matrix(const corpus::Waveform& wave) const {
  const int t = num_frames(static_cast<int>(wave.size()));
  const int win = cfg_.win_length, bins = num_bins();
  Mat frames(t, win);
  for (int f = 0; f < t; ++f) {
    const double* src = wave.data() + static_cast<long>(f) * cfg_.hop_length;
    double* dst = frames.row(f);
    for (int i = 0; i < win; ++i) dst[i] = src[i] * hann_.data()[i];
  }
  Mat re(t, bins), im(t, bins);
  kernels::gemm_nn(t, win, bins, frames.data(), dft_cos_.data(), re.data(), 0.0);
  kernels::gemm_nn(t, win, bins, frames.data(), dft_sin_.data(), im.data(), 0.0);
  Mat power(t, bins);
  for (size_t i = 0; i < power.size(); ++i) {
    power.data()[i] =
        re.data()[i] * re.data()[i] + im.data()[i] * im.data()[i];
  }
  return power;
}

FeatureMatrix Analyzer::stft_magnitude(const corpus::Waveform& wave) const {
  Mat power = power_matrix(wave);
  FeatureMatrix out;
  out.kind = FeatureKind::magnitude;
  out.frame_shift_ms = 1000.0 * cfg_.hop_length / corpus::kSampleRate;
  out.data = Mat(power.rows(), power.cols());
  for (size_t i = 0; i < power.size(); ++i)
    out.data.data()[i] = std::sqrt(power.data()[i]);
  return out;
}

FeatureMatrix Analyzer::logmel(const corpus::Waveform& wave) const {
  Mat power = power_matrix(wave);
  Mat mel(power.rows(), cfg_.num_mels);
  kernels::gemm_nn(power.rows(), power.cols(), cfg_.num_mels, power.data(),
                   mel_w_.data(), mel.data(), 0.0);
  FeatureMatrix out;
  out.kind = FeatureKind::logmel;
  out.frame_shift_ms = 1000.0 * cfg_.hop_length / corpus::kSampleRate;
  out.data = Mat(mel.rows(), mel.cols());
  for (size_t i = 0; i < mel.size(); ++i)
    out.data.data()[i] = std::log(std::max(mel.data()[i], cfg_.log_floor));
  return out;
}

int Analyzer::power_node(tape::Graph& g, int wave) const {
  const int frames = g.frame_signal(wave, cfg_.win_length, cfg_.hop_length);
  const int windowed = g.mul_row(frames, g.constant(hann_));
  const int re = g.matmul(windowed, g.constant(dft_cos_));
  const int im = g.matmul(windowed, g.constant(dft_sin_));
  return g.add(g.mul(re, re), g.mul(im, im));
}

int Analyzer::logmel_from_power(tape::Graph& g, int power) const {
  const int mel = g.matmul(power, g.constant(mel_w_));
  return g.log_floor(mel, cfg_.log_floor);
}

int Analyzer::magnitude_from_power(tape::Graph& g, int power) const {
  // Tiny epsilon keeps the sqrt gradient finite on silent frames.
  return g.sqrt_eps(power, 1e-12);
}

int Analyzer::logmel_from_magnitude(tape::Graph& g, int magnitude) const {
  return logmel_from_power(g, g.mul(magnitude, magnitude));
}

}  // namespace adaptasr::features
