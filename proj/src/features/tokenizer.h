// features/tokenizer.h

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

#ifndef ADAPTASR_FEATURES_TOKENIZER_H_
#define ADAPTASR_FEATURES_TOKENIZER_H_

#include <map>
#include <string>
#include <vector>

namespace adaptasr::features {

// Character (byte) level tokenizer with the reserved symbols <blank>, <unk>
// and <sos/eos> at fixed ids 0, 1, 2. The table is immutable after
// construction. Round trips are exact for in-vocabulary text; unknown bytes
// map to <unk>, which detokenize renders literally.
class Tokenizer {
 public:
  static constexpr int kBlankId = 0;
  static constexpr int kUnkId = 1;
  static constexpr int kSosEosId = 2;
  static constexpr int kNumReserved = 3;

  // Builds the table from the distinct bytes of `texts`, sorted.
  static Tokenizer build(const std::vector<std::string>& texts);
  static Tokenizer load(const std::string& path);
  void save(const std::string& path) const;
  // The "symbol<TAB>id" table as text, reserved symbols first.
  std::string serialize() const;
  static Tokenizer deserialize(const std::string& table_text);

  std::vector<int> tokenize(const std::string& text) const;
  std::string detokenize(const std::vector<int>& ids) const;

  int vocab_size() const { return kNumReserved + static_cast<int>(chars_.size()); }

 private:
  std::vector<char> chars_;        // id = kNumReserved + index
  std::map<char, int> char_to_id_;
  void rebuild_index();
};

}  // namespace adaptasr::features

#endif  // ADAPTASR_FEATURES_TOKENIZER_H_
