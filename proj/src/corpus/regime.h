// corpus/regime.h

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

#ifndef ADAPTASR_CORPUS_REGIME_H_
#define ADAPTASR_CORPUS_REGIME_H_

#include <cstdint>
#include <optional>

#include "corpus/manifest.h"

namespace adaptasr::corpus {

// Sentinel for "take every available record of this kind".
inline constexpr int kAllRecords = -1;

// Training-set composition for adaptation runs: how many real and simulated
// records, optionally restricted to one held-out condition, optionally
// balanced across conditions.
struct DataRegime {
  int real_count = kAllRecords;
  int simu_count = kAllRecords;
  std::optional<std::string> held_out_condition;
  std::optional<int> multi_condition_quota;  // per-condition count
  uint64_t seed = 0;
};

// Deterministically selects a subset of `manifest` according to `regime`.
// Records are sorted by id before seeded sampling, so the selection is
// independent of manifest order. Only train-split records are considered.
// Throws with a requested-vs-available message on shortfall.
Manifest select_regime(const Manifest& manifest, const DataRegime& regime);

}  // namespace adaptasr::corpus

#endif  // ADAPTASR_CORPUS_REGIME_H_
