// corpus/regime.cc

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

#include "corpus/regime.h"

#include <algorithm>

#include "core/rng.h"
#include "core/util.h"

namespace adaptasr::corpus {

namespace {

// Seeded selection of `count` records from `pool` (sorted by id first).
// count == kAllRecords takes everything; `what` labels shortfall errors.
std::vector<UtteranceRecord> pick(std::vector<UtteranceRecord> pool, int count,
                                  uint64_t seed, uint64_t stream,
                                  const std::string& what) {
  std::sort(pool.begin(), pool.end(),
            [](const UtteranceRecord& a, const UtteranceRecord& b) {
              return a.id < b.id;
            });
  if (count == kAllRecords) return pool;
  require(static_cast<int>(pool.size()) >= count,
          str_cat("select_regime: requested ", count, " ", what, " but only ",
                  pool.size(), " available"));
  Rng rng(derive_seed(seed, {0x7265670cULL, stream}));
  rng.shuffle(&pool);
  pool.resize(count);
  std::sort(pool.begin(), pool.end(),
            [](const UtteranceRecord& a, const UtteranceRecord& b) {
              return a.id < b.id;
            });
  return pool;
}

}  // namespace

Manifest select_regime(const Manifest& manifest, const DataRegime& regime) {
  require(regime.real_count != 0 || regime.simu_count != 0,
          "select_regime: at least one of real_count/simu_count must be nonzero");
  if (regime.held_out_condition) {
    require(manifest.has_condition(*regime.held_out_condition),
            str_cat("select_regime: held-out condition '",
                    *regime.held_out_condition, "' not in the manifest set"));
  }

  std::vector<UtteranceRecord> real_pool, simu_pool;
  for (const auto& r : manifest.split_records(Split::train)) {
    if (regime.held_out_condition && r.condition != *regime.held_out_condition)
      continue;
    (r.is_real ? real_pool : simu_pool).push_back(r);
  }

  Manifest out(manifest.conditions());
  auto take_kind = [&](std::vector<UtteranceRecord> pool, int count,
                       uint64_t stream, const std::string& what) {
    if (count == 0) return;
    if (regime.multi_condition_quota) {
      const int quota = *regime.multi_condition_quota;
      require(count == kAllRecords ||
                  count == quota * static_cast<int>(manifest.conditions().size()),
              str_cat("select_regime: ", what, " count ", count,
                      " does not equal quota ", quota, " x ",
                      manifest.conditions().size(), " conditions"));
      uint64_t sub = 0;
      for (const auto& cond : manifest.conditions()) {
        std::vector<UtteranceRecord> cpool;
        for (const auto& r : pool)
          if (r.condition == cond) cpool.push_back(r);
        for (auto& r : pick(std::move(cpool), quota, regime.seed,
                            stream * 1000 + sub, str_cat(what, " (", cond, ")")))
          out.append(std::move(r));
        ++sub;
      }
    } else {
      for (auto& r : pick(std::move(pool), count, regime.seed, stream, what))
        out.append(std::move(r));
    }
  };

  take_kind(std::move(real_pool), regime.real_count, 1, "real records");
  take_kind(std::move(simu_pool), regime.simu_count, 2, "simulated records");
  return out;
}

}  // namespace adaptasr::corpus
