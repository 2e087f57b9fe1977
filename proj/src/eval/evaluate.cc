// eval/evaluate.cc

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

#include "eval/evaluate.h"

#include "core/util.h"
#include "corpus/wav.h"
#include "eval/wer.h"

namespace adaptasr::eval {

std::string transcribe(asr::Model& model, const corpus::Waveform& wave,
                       const features::Analyzer& an,
                       const features::Tokenizer& tok) {
  Mat feats;
  if (auto* fe = dynamic_cast<enhancement::Frontend*>(model.frontend())) {
    feats = fe->enhanced_logmel(wave, an);
  } else {
    feats = an.logmel(wave).data;
  }
  return tok.detokenize(model.decode_greedy(feats));
}

WERReport evaluate(asr::Model& model, const corpus::Manifest& manifest,
                   corpus::Split split, const features::Analyzer& an,
                   const features::Tokenizer& tok,
                   const std::optional<std::string>& only_condition) {
  const auto records = manifest.split_records(split);
  require(!records.empty(),
          str_cat("evaluate: manifest has no '", corpus::split_name(split),
                  "' records"));
  WERReport report(manifest.conditions());
  const std::string split_str = corpus::split_name(split);
  bool scored = false;
  for (const auto& rec : records) {
    if (only_condition && rec.condition != *only_condition) continue;
    const std::string hyp =
        transcribe(model, corpus::load_wav(rec.audio_path), an, tok);
    report.add(split_str, rec.condition, wer_pair(rec.transcript, hyp));
    scored = true;
  }
  require(scored, str_cat("evaluate: nothing to score in split '", split_str,
                          only_condition ? str_cat("' for condition '",
                                                   *only_condition, "'")
                                         : std::string("'")));
  return report;
}

}  // namespace adaptasr::eval
