// corpus/wav.h

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

#ifndef ADAPTASR_CORPUS_WAV_H_
#define ADAPTASR_CORPUS_WAV_H_

#include <string>
#include <vector>

namespace adaptasr::corpus {

inline constexpr int kSampleRate = 16000;

using Waveform = std::vector<double>;

// Reads a RIFF PCM WAV file. Only 16 kHz mono 16-bit input is accepted;
// anything else is rejected with an explicit reason, never resampled.
// Samples are normalized to [-1, 1] by dividing by 32768.
Waveform load_wav(const std::string& path);

// Writes 16 kHz mono 16-bit PCM. Samples are clamped to [-1, 1] and rounded
// to the nearest integer level.
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace adaptasr::corpus

#endif  // ADAPTASR_CORPUS_WAV_H_
