// training/optimizer.h

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

#ifndef ADAPTASR_TRAINING_OPTIMIZER_H_
#define ADAPTASR_TRAINING_OPTIMIZER_H_

#include <map>
#include <string>
#include <vector>

#include "tape/params.h"

namespace adaptasr::training {

struct OptimConfig {
  double peak_lr = 1e-3;
  int warmup_steps = 400;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  double grad_clip = 5.0;  // global norm; <= 0 disables
};

// Adam with a linear-warmup, inverse-square-root decay schedule:
// lr(step) = peak_lr * min(step/warmup, sqrt(warmup/step)).
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const OptimConfig& cfg) : cfg_(cfg) {}

  double lr_at(long step) const;

  // Clips the global gradient norm over `params`, then applies one Adam
  // update to every trainable parameter. `step` starts at 1.
  void step(const std::vector<std::pair<std::string, tape::Param*>>& params,
            long step_num);

  const OptimConfig& config() const { return cfg_; }

 private:
  struct State {
    Mat m, v;
  };
  OptimConfig cfg_;
  std::map<std::string, State> state_;
};

}  // namespace adaptasr::training

#endif  // ADAPTASR_TRAINING_OPTIMIZER_H_
