// eval/wer.h

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

#ifndef ADAPTASR_EVAL_WER_H_
#define ADAPTASR_EVAL_WER_H_

#include <string>
#include <vector>

namespace adaptasr::eval {

struct WerCounts {
  long substitutions = 0;
  long deletions = 0;
  long insertions = 0;
  long ref_words = 0;

  long errors() const { return substitutions + deletions + insertions; }
  double percent() const {
    return ref_words == 0 ? 0.0
                          : 100.0 * static_cast<double>(errors()) / ref_words;
  }
  WerCounts& operator+=(const WerCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_words += o.ref_words;
    return *this;
  }
};

// Lowercased whitespace word tokenization used for scoring.
std::vector<std::string> score_words(const std::string& text);

// Minimal edit-distance alignment of one ref/hyp pair. Among alignments of
// minimal total cost the (S, D, I) decomposition is made unique by
// lexicographic minimization of (errors, S, D, I), so independent
// implementations agree exactly. Empty references are an error.
WerCounts wer_pair(const std::string& ref, const std::string& hyp);

// Aggregated counts over equal-length lists.
WerCounts wer(const std::vector<std::string>& refs,
              const std::vector<std::string>& hyps);

}  // namespace adaptasr::eval

#endif  // ADAPTASR_EVAL_WER_H_
