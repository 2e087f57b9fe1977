// eval/report.h

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

#ifndef ADAPTASR_EVAL_REPORT_H_
#define ADAPTASR_EVAL_REPORT_H_

#include <map>
#include <string>
#include <vector>

#include "eval/wer.h"
#include "json.hpp"

namespace adaptasr::eval {

// Per-(split, condition) WER cells shaped like the standard dev/eval x
// condition tables. The avg column is the micro-average: WER recomputed from
// the pooled error and reference counts, never the mean of percentages.
class WERReport {
 public:
  WERReport() = default;
  explicit WERReport(std::vector<std::string> conditions)
      : conditions_(std::move(conditions)) {}

  void add(const std::string& split, const std::string& condition,
           const WerCounts& counts);

  const std::vector<std::string>& conditions() const { return conditions_; }
  std::vector<std::string> splits() const;
  bool has_cell(const std::string& split, const std::string& condition) const;
  const WerCounts& cell(const std::string& split,
                        const std::string& condition) const;
  double wer_percent(const std::string& split,
                     const std::string& condition) const;
  double average_percent(const std::string& split) const;

  nlohmann::json to_json() const;
  static WERReport from_json(const nlohmann::json& j);

  bool operator==(const WERReport& o) const;

 private:
  std::vector<std::string> conditions_;
  std::map<std::pair<std::string, std::string>, WerCounts> cells_;
};

// One grid point of an ablation table.
struct AblationRow {
  std::string exp_id;
  std::string axis_point;
  bool failed = false;
  std::string error;
  WERReport report;
  long trainable_adapter_params = 0;
  long trainable_frontend_params = 0;

  nlohmann::json to_json() const;
  static AblationRow from_json(const nlohmann::json& j);
};

struct AblationReport {
  std::string axis;
  std::vector<std::string> conditions;
  std::vector<std::string> splits{"dev", "eval"};
  std::vector<AblationRow> rows;

  bool any_failed() const;
};

// Rendered artifacts: a comma-separated file with columns
// exp_id,axis_point,split,<conditions...>,avg and an aligned text table.
// Numeric cells carry one decimal; failed rows carry a FAILED marker.
std::string render_report_csv(const AblationReport& report);
std::string render_report_text(const AblationReport& report);
void write_report_files(const AblationReport& report, const std::string& dir);

}  // namespace adaptasr::eval

#endif  // ADAPTASR_EVAL_REPORT_H_
