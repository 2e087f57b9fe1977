// training/checkpoint.h

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

#ifndef ADAPTASR_TRAINING_CHECKPOINT_H_
#define ADAPTASR_TRAINING_CHECKPOINT_H_

#include <map>
#include <string>
#include <vector>

#include "core/mat.h"
#include "json.hpp"

namespace adaptasr::training {

// Checkpoint file layout: the 8-byte magic "AASRCKPT", a u32 format version,
// a u64 JSON header length, the JSON header, then the raw little-endian
// float64 parameter arrays in header order. Round trips are bit-exact.
struct CheckpointMeta {
  std::string config_hash;  // model structural signature (+ run hash if any)
  long step = 0;
  int epoch = 0;
  double dev_metric = 0.0;
  std::vector<std::string> component_tags;
  std::string backbone_hash;  // set on adapted checkpoints
  nlohmann::json extra;       // adapter spec, frontend config, source steps
};

struct Checkpoint {
  CheckpointMeta meta;
  std::map<std::string, Mat> params;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
  static CheckpointMeta load_meta(const std::string& path);
};

// Elementwise arithmetic mean over checkpoints with identical config hashes
// and parameter name sets. Metadata records the source steps.
Checkpoint average_checkpoints(const std::vector<Checkpoint>& checkpoints);

// Bookkeeping over the per-epoch checkpoints of one run directory.
class CheckpointStore {
 public:
  explicit CheckpointStore(std::string dir);

  struct Entry {
    std::string path;
    double dev_metric = 0.0;
    long step = 0;
    int epoch = 0;
  };

  std::string add(const Checkpoint& ckpt);  // writes ckpt_epoch{N}.ckpt
  std::vector<Entry> entries() const;

  // The k entries with the lowest dev metric; ties broken by earlier step.
  std::vector<Entry> select_topk_by_dev(int k) const;
  // Deletes every stored checkpoint not in the current top k.
  void prune_to_topk(int k);

 private:
  std::string dir_;
};

}  // namespace adaptasr::training

#endif  // ADAPTASR_TRAINING_CHECKPOINT_H_
