// eval/wer.cc

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

#include "eval/wer.h"

#include <array>
#include <cctype>
#include <sstream>

#include "core/util.h"

namespace adaptasr::eval {

std::vector<std::string> score_words(const std::string& text) {
  std::string lowered(text);
  for (char& c : lowered) c = static_cast<char>(std::tolower(
      static_cast<unsigned char>(c)));
  std::istringstream ss(lowered);
  std::vector<std::string> words;
  std::string w;
  while (ss >> w) words.push_back(w);
  return words;
}

namespace {

// (errors, S, D, I) with lexicographic ordering; addition of a constant move
// cost preserves the order, so the DP below has unique optima.
struct Cell {
  long cost = 0, s = 0, d = 0, i = 0;
  bool operator<(const Cell& o) const {
    if (cost != o.cost) return cost < o.cost;
    if (s != o.s) return s < o.s;
    if (d != o.d) return d < o.d;
    return i < o.i;
  }
  Cell plus(long ds, long dd, long di) const {
    return {cost + ds + dd + di, s + ds, d + dd, i + di};
  }
};

}  // namespace

WerCounts wer_pair(const std::string& ref, const std::string& hyp) {
  const auto r = score_words(ref);
  const auto h = score_words(hyp);
  require(!r.empty(), str_cat("wer: empty reference '", ref, "'"));

  const size_t n = r.size(), m = h.size();
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1].plus(0, 0, 1);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0].plus(0, 1, 0);
    for (size_t j = 1; j <= m; ++j) {
      const bool match = r[i - 1] == h[j - 1];
      Cell best = match ? prev[j - 1] : prev[j - 1].plus(1, 0, 0);
      const Cell del = prev[j].plus(0, 1, 0);
      const Cell ins = cur[j - 1].plus(0, 0, 1);
      if (del < best) best = del;
      if (ins < best) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  WerCounts c;
  c.substitutions = prev[m].s;
  c.deletions = prev[m].d;
  c.insertions = prev[m].i;
  c.ref_words = static_cast<long>(n);
  return c;
}

WerCounts wer(const std::vector<std::string>& refs,
              const std::vector<std::string>& hyps) {
  require(refs.size() == hyps.size(), "wer: list length mismatch");
  WerCounts total;
  for (size_t i = 0; i < refs.size(); ++i) total += wer_pair(refs[i], hyps[i]);
  return total;
}

}  // namespace adaptasr::eval
