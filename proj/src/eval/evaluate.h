// eval/evaluate.h

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

#ifndef ADAPTASR_EVAL_EVALUATE_H_
#define ADAPTASR_EVAL_EVALUATE_H_

#include <optional>

#include "asr/model.h"
#include "corpus/manifest.h"
#include "enhancement/frontend.h"
#include "eval/report.h"
#include "features/tokenizer.h"

namespace adaptasr::eval {

// Greedily decodes every utterance of `split`, scores per condition and
// returns the table-shaped report for that split. When the model has a
// front-end attached, features are enhanced through it. `only_condition`
// restricts scoring to one condition (held-out protocol).
WERReport evaluate(asr::Model& model, const corpus::Manifest& manifest,
                   corpus::Split split, const features::Analyzer& an,
                   const features::Tokenizer& tok,
                   const std::optional<std::string>& only_condition = {});

// Transcript hypothesis for one waveform (through the front-end if any).
std::string transcribe(asr::Model& model, const corpus::Waveform& wave,
                       const features::Analyzer& an,
                       const features::Tokenizer& tok);

}  // namespace adaptasr::eval

#endif  // ADAPTASR_EVAL_EVALUATE_H_
