// features/features.h

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

#ifndef ADAPTASR_FEATURES_FEATURES_H_
#define ADAPTASR_FEATURES_FEATURES_H_

#include "core/mat.h"
#include "corpus/wav.h"
#include "tape/graph.h"

namespace adaptasr::features {

enum class FeatureKind { logmel, magnitude };

struct FeatureMatrix {
  Mat data;  // T x F
  double frame_shift_ms = 10.0;
  FeatureKind kind = FeatureKind::logmel;
};

// Analysis configuration. The 25 ms / 10 ms Hann framing with a 512-point
// FFT and an 80-band 0-8000 Hz mel filterbank is fixed project-wide.
struct FeatureConfig {
  int win_length = 400;   // 25 ms at 16 kHz
  int hop_length = 160;   // 10 ms
  int fft_size = 512;
  int num_mels = 80;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  double log_floor = 1e-10;  // floor on power before the log
};

// Shared analysis constants (Hann window, DFT bases, mel weights). Both the
// eager feature path and the differentiable graph path are built from these,
// so their outputs agree bit for bit.
class Analyzer {
 public:
  explicit Analyzer(const FeatureConfig& cfg = FeatureConfig());

  const FeatureConfig& config() const { return cfg_; }
  int num_bins() const { return cfg_.fft_size / 2 + 1; }
  int num_frames(int num_samples) const;

  // Linear magnitude spectrogram, T x (fft/2+1).
  FeatureMatrix stft_magnitude(const corpus::Waveform& wave) const;
  // 80-dim log mel filterbank energies of the power spectrum.
  FeatureMatrix logmel(const corpus::Waveform& wave) const;

  // Graph-path equivalents for differentiable front-ends. `wave` is a
  // (1 x N) node; returns a (T x bins) power node or (T x mels) logmel node.
  int power_node(tape::Graph& g, int wave) const;
  int logmel_from_power(tape::Graph& g, int power) const;
  int magnitude_from_power(tape::Graph& g, int power) const;
  int logmel_from_magnitude(tape::Graph& g, int magnitude) const;

  const Mat& mel_weights() const { return mel_w_; }  // bins x mels

 private:
  Mat power_matrix(const corpus::Waveform& wave) const;

  FeatureConfig cfg_;
  Mat hann_;   // 1 x win
  Mat dft_cos_;  // win x bins
  Mat dft_sin_;  // win x bins
  Mat mel_w_;  // bins x mels
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace adaptasr::features

#endif  // ADAPTASR_FEATURES_FEATURES_H_
