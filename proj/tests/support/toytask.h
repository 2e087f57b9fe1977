// tests/support/toytask.h

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

#ifndef ADAPTASR_TESTS_SUPPORT_TOYTASK_H_
#define ADAPTASR_TESTS_SUPPORT_TOYTASK_H_

#include <cstdint>
#include <string>

#include "asr/config.h"
#include "corpus/manifest.h"
#include "corpus/wav.h"
#include "features/tokenizer.h"

namespace adaptasr::testsupport {

// A synthetic desk-scale speech task: words are pairs of tone "phonemes",
// utterances are three words. The pretraining corpus mixes clean speech with
// broadband white noise (noise family A); the adaptation corpus uses four
// structured noise conditions (family B: warble, siren, impulsive, hum) that
// the pretrained model has never seen.
struct ToyTaskOptions {
  std::string root;  // directory for wav files + manifests
  uint64_t seed = 1;

  int pretrain_train = 144;  // half clean, half white-noise mixtures
  int pretrain_dev = 24;

  int adapt_train_per_cond = 24;
  int adapt_dev_per_cond = 8;
  int adapt_eval_per_cond = 8;

  double pretrain_snr_lo = 5.0, pretrain_snr_hi = 20.0;
  double adapt_snr_lo = 0.0, adapt_snr_hi = 6.0;

  // Fraction of adaptation train records flagged as "real" recordings
  // (no clean reference, no snr field).
  double fraction_real = 0.5;
};

struct ToyTask {
  corpus::Manifest pretrain;  // conditions {clean, white}, splits train/dev
  corpus::Manifest adapt;     // four B conditions, splits train/dev/eval
  features::Tokenizer tokenizer;
  std::vector<std::string> b_conditions;
};

ToyTask make_toy_task(const ToyTaskOptions& opt);

// The compact model configuration the toy task trains in a few minutes.
asr::ModelConfig toy_model_config(int vocab_size);

// Deterministic synthetic utterance: returns the waveform and transcript
// for index `i` of stream `stream_seed`.
std::pair<corpus::Waveform, std::string> toy_utterance(uint64_t stream_seed,
                                                       int i);

// Family-B noise generators by condition name.
corpus::Waveform toy_noise(const std::string& condition, size_t num_samples,
                           uint64_t seed);

}  // namespace adaptasr::testsupport

#endif  // ADAPTASR_TESTS_SUPPORT_TOYTASK_H_
