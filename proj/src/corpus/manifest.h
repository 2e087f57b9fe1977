// corpus/manifest.h

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

#ifndef ADAPTASR_CORPUS_MANIFEST_H_
#define ADAPTASR_CORPUS_MANIFEST_H_

#include <optional>
#include <string>
#include <vector>

namespace adaptasr::corpus {

enum class Split { train, dev, eval };

std::string split_name(Split s);
Split parse_split(const std::string& s);

// One audio sample with transcript and provenance. `snr_db` is present iff
// the sample is a simulated mixture; `clean_path` optionally points at the
// clean source of a simulated mixture (needed for enhancement losses).
struct UtteranceRecord {
  std::string id;
  std::string audio_path;
  std::string transcript;
  std::string condition;
  bool is_real = false;
  Split split = Split::train;
  std::optional<double> snr_db;
  std::optional<std::string> clean_path;
};

// A manifest is a UTF-8 file with one JSON object per line. The first line
// is a header object declaring the condition set; record lines follow.
class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(std::vector<std::string> conditions)
      : conditions_(std::move(conditions)) {}

  static Manifest load(const std::string& path);
  void save(const std::string& path) const;

  // Validates record invariants (unique id, snr presence, condition known)
  // before appending.
  void append(UtteranceRecord rec);

  const std::vector<UtteranceRecord>& records() const { return records_; }
  const std::vector<std::string>& conditions() const { return conditions_; }
  bool has_condition(const std::string& c) const;

  std::vector<UtteranceRecord> split_records(Split s) const;

 private:
  std::vector<std::string> conditions_;
  std::vector<UtteranceRecord> records_;
};

}  // namespace adaptasr::corpus

#endif  // ADAPTASR_CORPUS_MANIFEST_H_
