// features/specaug.cc

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

#include "features/specaug.h"

#include "core/rng.h"
#include "core/util.h"

namespace adaptasr::features {

FeatureMatrix spec_augment(const FeatureMatrix& features,
                           const SpecAugPolicy& policy) {
  const Mat& x = features.data;
  const int t = x.rows(), f = x.cols();
  require(policy.max_freq_width <= f,
          "spec_augment: max_freq_width exceeds feature bins");
  require(policy.max_time_width <= t,
          "spec_augment: max_time_width exceeds frame count");

  FeatureMatrix out = features;
  if (policy.is_identity()) return out;

  double mean = 0.0;
  for (size_t i = 0; i < x.size(); ++i) mean += x.data()[i];
  mean /= static_cast<double>(x.size());

  Rng rng(derive_seed(policy.seed, {0x73706563ULL}));
  for (int m = 0; m < policy.num_freq_masks; ++m) {
    const int width =
        static_cast<int>(rng.uniform_int(policy.max_freq_width + 1));
    const int start = static_cast<int>(rng.uniform_int(f - width + 1));
    for (int r = 0; r < t; ++r)
      for (int c = start; c < start + width; ++c) out.data(r, c) = mean;
  }
  for (int m = 0; m < policy.num_time_masks; ++m) {
    const int width =
        static_cast<int>(rng.uniform_int(policy.max_time_width + 1));
    const int start = static_cast<int>(rng.uniform_int(t - width + 1));
    for (int r = start; r < start + width; ++r)
      for (int c = 0; c < f; ++c) out.data(r, c) = mean;
  }
  return out;
}

}  // namespace adaptasr::features
