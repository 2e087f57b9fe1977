// tape/params.h

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

#ifndef ADAPTASR_TAPE_PARAMS_H_
#define ADAPTASR_TAPE_PARAMS_H_

#include <map>
#include <string>
#include <vector>

#include "core/rng.h"
#include "tape/graph.h"

namespace adaptasr::tape {

// Named parameter collection. Iteration order is the sorted name order, so
// seeded initialization and checkpoint layout are reproducible.
class ParamStore {
 public:
  Param& create(const std::string& name, int rows, int cols);
  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  bool has(const std::string& name) const { return map_.count(name) > 0; }

  std::map<std::string, Param>& map() { return map_; }
  const std::map<std::string, Param>& map() const { return map_; }

  void set_trainable(bool trainable);
  void zero_grads();
  size_t count_trainable() const;
  size_t count_total() const;

 private:
  std::map<std::string, Param> map_;
};

// Anything that owns trainable parameters and can be driven by the training
// loop (the ASR model, adapter banks, enhancement front-ends).
class TrainableComponent {
 public:
  virtual ~TrainableComponent() = default;
  virtual ParamStore& params() = 0;
  virtual const ParamStore& params() const = 0;
  virtual std::string component_tag() const = 0;
};

void glorot_uniform_init(Mat* m, Rng* rng);
void normal_init(Mat* m, double stddev, Rng* rng);

}  // namespace adaptasr::tape

#endif  // ADAPTASR_TAPE_PARAMS_H_
