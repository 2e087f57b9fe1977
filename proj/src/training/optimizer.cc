// training/optimizer.cc

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

#include "training/optimizer.h"

#include <cmath>

#include "core/util.h"

namespace adaptasr::training {

double AdamOptimizer::lr_at(long step) const {
  require(step >= 1, "lr_at: steps start at 1");
  const double w = static_cast<double>(cfg_.warmup_steps);
  const double s = static_cast<double>(step);
  return cfg_.peak_lr * std::min(s / w, std::sqrt(w / s));
}

void AdamOptimizer::step(
    const std::vector<std::pair<std::string, tape::Param*>>& params,
    long step_num) {
  if (cfg_.grad_clip > 0.0) {
    double sq = 0.0;
    for (const auto& [name, p] : params) {
      if (!p->trainable) continue;
      for (size_t i = 0; i < p->grad.size(); ++i)
        sq += p->grad.data()[i] * p->grad.data()[i];
    }
    const double norm = std::sqrt(sq);
    if (norm > cfg_.grad_clip) {
      const double scale = cfg_.grad_clip / norm;
      for (const auto& [name, p] : params) {
        if (!p->trainable) continue;
        for (size_t i = 0; i < p->grad.size(); ++i)
          p->grad.data()[i] *= scale;
      }
    }
  }

  const double lr = lr_at(step_num);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_num));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_num));
  for (const auto& [name, p] : params) {
    if (!p->trainable) continue;
    State& st = state_[name];
    if (st.m.size() != p->value.size()) {
      st.m = Mat(p->value.rows(), p->value.cols());
      st.v = Mat(p->value.rows(), p->value.cols());
    }
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad.data()[i];
      st.m.data()[i] = cfg_.beta1 * st.m.data()[i] + (1.0 - cfg_.beta1) * g;
      st.v.data()[i] = cfg_.beta2 * st.v.data()[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = st.m.data()[i] / bc1;
      const double vhat = st.v.data()[i] / bc2;
      p->value.data()[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace adaptasr::training
