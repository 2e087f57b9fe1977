// features/tokenizer.cc

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

#include "features/tokenizer.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "core/util.h"

namespace adaptasr::features {

namespace {

const char* kReservedNames[] = {"<blank>", "<unk>", "<sos/eos>"};

// Space is written as <space> in the table file so the symbol column never
// contains literal whitespace.
std::string encode_symbol(char c) {
  if (c == ' ') return "<space>";
  return std::string(1, c);
}

char decode_symbol(const std::string& s) {
  if (s == "<space>") return ' ';
  require(s.size() == 1, str_cat("tokenizer: bad symbol '", s, "' in table"));
  return s[0];
}

}  // namespace

void Tokenizer::rebuild_index() {
  char_to_id_.clear();
  for (size_t i = 0; i < chars_.size(); ++i)
    char_to_id_[chars_[i]] = kNumReserved + static_cast<int>(i);
}

Tokenizer Tokenizer::build(const std::vector<std::string>& texts) {
  std::set<char> s;
  for (const auto& t : texts)
    for (char c : t) s.insert(c);
  Tokenizer tok;
  tok.chars_.assign(s.begin(), s.end());
  tok.rebuild_index();
  return tok;
}

std::vector<int> Tokenizer::tokenize(const std::string& text) const {
  std::vector<int> ids;
  ids.reserve(text.size());
  for (char c : text) {
    auto it = char_to_id_.find(c);
    ids.push_back(it == char_to_id_.end() ? kUnkId : it->second);
  }
  return ids;
}

std::string Tokenizer::detokenize(const std::vector<int>& ids) const {
  std::string out;
  for (int id : ids) {
    require(id >= 0 && id < vocab_size(),
            str_cat("detokenize: id ", id, " out of range [0, ", vocab_size(),
                    ")"));
    if (id < kNumReserved) {
      out += kReservedNames[id];
    } else {
      out.push_back(chars_[id - kNumReserved]);
    }
  }
  return out;
}

std::string Tokenizer::serialize() const {
  std::string out;
  for (int i = 0; i < kNumReserved; ++i)
    out += str_cat(kReservedNames[i], "\t", i, "\n");
  for (size_t i = 0; i < chars_.size(); ++i)
    out += str_cat(encode_symbol(chars_[i]), "\t", kNumReserved + i, "\n");
  return out;
}

Tokenizer Tokenizer::deserialize(const std::string& table_text) {
  Tokenizer tok;
  std::istringstream in(table_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    require(tab != std::string::npos,
            str_cat("tokenizer: missing tab in table line ", line_no + 1));
    const std::string sym = line.substr(0, tab);
    const int id = std::stoi(line.substr(tab + 1));
    require(id == line_no,
            str_cat("tokenizer: non-contiguous id ", id, " in table"));
    if (line_no < kNumReserved) {
      require(sym == kReservedNames[line_no],
              str_cat("tokenizer: expected reserved symbol ",
                      kReservedNames[line_no], " at id ", line_no));
    } else {
      tok.chars_.push_back(decode_symbol(sym));
    }
    ++line_no;
  }
  require(line_no >= kNumReserved,
          "tokenizer: table is missing the reserved symbols");
  tok.rebuild_index();
  return tok;
}

void Tokenizer::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(str_cat("tokenizer: cannot write ", path));
  out << serialize();
  require(out.good(), str_cat("tokenizer: short write to ", path));
}

Tokenizer Tokenizer::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(str_cat("tokenizer: cannot open ", path));
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize(text);
}

}  // namespace adaptasr::features
