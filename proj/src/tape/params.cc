// tape/params.cc

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

#include "tape/params.h"

#include <cmath>

#include "core/util.h"

namespace adaptasr::tape {

Param& ParamStore::create(const std::string& name, int rows, int cols) {
  require(!map_.count(name), str_cat("ParamStore: duplicate param '", name, "'"));
  Param& p = map_[name];
  p.value = Mat(rows, cols);
  p.grad = Mat(rows, cols);
  return p;
}

Param& ParamStore::at(const std::string& name) {
  auto it = map_.find(name);
  require(it != map_.end(), str_cat("ParamStore: unknown param '", name, "'"));
  return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
  auto it = map_.find(name);
  require(it != map_.end(), str_cat("ParamStore: unknown param '", name, "'"));
  return it->second;
}

void ParamStore::set_trainable(bool trainable) {
  for (auto& [name, p] : map_) p.trainable = trainable;
}

void ParamStore::zero_grads() {
  for (auto& [name, p] : map_) p.grad.set_zero();
}

size_t ParamStore::count_trainable() const {
  size_t n = 0;
  for (const auto& [name, p] : map_)
    if (p.trainable) n += p.value.size();
  return n;
}

size_t ParamStore::count_total() const {
  size_t n = 0;
  for (const auto& [name, p] : map_) n += p.value.size();
  return n;
}

void glorot_uniform_init(Mat* m, Rng* rng) {
  const double limit = std::sqrt(6.0 / (m->rows() + m->cols()));
  for (size_t i = 0; i < m->size(); ++i)
    m->data()[i] = rng->uniform(-limit, limit);
}

void normal_init(Mat* m, double stddev, Rng* rng) {
  for (size_t i = 0; i < m->size(); ++i) m->data()[i] = stddev * rng->normal();
}

}  // namespace adaptasr::tape
