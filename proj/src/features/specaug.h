// features/specaug.h

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

#ifndef ADAPTASR_FEATURES_SPECAUG_H_
#define ADAPTASR_FEATURES_SPECAUG_H_

#include <cstdint>

#include "features/features.h"

namespace adaptasr::features {

struct SpecAugPolicy {
  int num_freq_masks = 0;
  int max_freq_width = 0;
  int num_time_masks = 0;
  int max_time_width = 0;
  uint64_t seed = 0;

  bool is_identity() const {
    return num_freq_masks == 0 && num_time_masks == 0;
  }
};

// Masks random time and frequency bands of the feature matrix, filling each
// band with the per-utterance mean (computed before masking). Unmasked cells
// are returned bit-identical; width 0 masks are allowed and mask nothing.
FeatureMatrix spec_augment(const FeatureMatrix& features,
                           const SpecAugPolicy& policy);

}  // namespace adaptasr::features

#endif  // ADAPTASR_FEATURES_SPECAUG_H_
