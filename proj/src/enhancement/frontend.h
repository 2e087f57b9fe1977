// enhancement/frontend.h

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

#ifndef ADAPTASR_ENHANCEMENT_FRONTEND_H_
#define ADAPTASR_ENHANCEMENT_FRONTEND_H_

#include "corpus/wav.h"
#include "features/features.h"
#include "tape/params.h"

namespace adaptasr::enhancement {

enum class FrontendKind { masknet, demucs_lite };

std::string frontend_kind_name(FrontendKind k);

// A speech-enhancement front-end placed before the ASR model. Implementations
// differ in operating domain (magnitude mask vs waveform), so the common
// surface is "noisy waveform in, enhanced logmel out", all on one tape so
// ASR-loss gradients reach the front-end parameters. The domain-specific
// enhanced signal is exposed alongside the features so the SE loss can reuse
// it without a second forward pass.
class Frontend : public tape::TrainableComponent {
 public:
  struct Forward {
    int features = -1;  // enhanced logmel node (T x mels)
    int enhanced = -1;  // enhanced signal in the front-end's domain
  };

  virtual ~Frontend() = default;
  virtual FrontendKind kind() const = 0;

  // Runs enhancement on a (1 x N) noisy waveform node.
  virtual Forward forward(tape::Graph& g, int noisy_wave,
                          const features::Analyzer& an) = 0;
  // Clean reference in the same domain as Forward::enhanced.
  virtual int clean_reference(tape::Graph& g, int clean_wave,
                              const features::Analyzer& an) = 0;

  // Eager convenience path used by evaluation.
  Mat enhanced_logmel(const corpus::Waveform& noisy,
                      const features::Analyzer& an);
};

Mat waveform_to_mat(const corpus::Waveform& w);

}  // namespace adaptasr::enhancement

#endif  // ADAPTASR_ENHANCEMENT_FRONTEND_H_
