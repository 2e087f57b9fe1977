// corpus/mixing.h

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

#ifndef ADAPTASR_CORPUS_MIXING_H_
#define ADAPTASR_CORPUS_MIXING_H_

#include <cstdint>

#include "corpus/wav.h"

namespace adaptasr::corpus {

enum class NoiseOffsetPolicy { random, fixed_zero };

struct MixResult {
  Waveform noisy;
  Waveform noise_segment;  // the scaled-by-1 noise segment that was added
  double gain = 0.0;
};

// Adds a noise segment to `clean` at the requested SNR. Powers are mean
// squared amplitude over the used segments; noise shorter than the clean
// signal is tiled (whole-copy concatenation) before the seeded segment offset
// is drawn. The seed fully determines the output.
MixResult mix_at_snr(const Waveform& clean, const Waveform& noise,
                     double snr_db, uint64_t seed,
                     NoiseOffsetPolicy policy = NoiseOffsetPolicy::random);

// 10*log10(P_signal / P_noise) over equal-length segments.
double measure_snr(const Waveform& signal, const Waveform& noise_component);

double mean_power(const Waveform& wave);

}  // namespace adaptasr::corpus

#endif  // ADAPTASR_CORPUS_MIXING_H_
