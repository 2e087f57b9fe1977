// eval/report.cc

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

#include "eval/report.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/util.h"

namespace adaptasr::eval {

void WERReport::add(const std::string& split, const std::string& condition,
                    const WerCounts& counts) {
  require(std::find(conditions_.begin(), conditions_.end(), condition) !=
              conditions_.end(),
          str_cat("WERReport: condition '", condition,
                  "' outside the declared set"));
  cells_[{split, condition}] += counts;
}

std::vector<std::string> WERReport::splits() const {
  std::vector<std::string> out;
  for (const auto& [key, counts] : cells_) {
    if (std::find(out.begin(), out.end(), key.first) == out.end())
      out.push_back(key.first);
  }
  return out;
}

bool WERReport::has_cell(const std::string& split,
                         const std::string& condition) const {
  return cells_.count({split, condition}) > 0;
}

const WerCounts& WERReport::cell(const std::string& split,
                                 const std::string& condition) const {
  auto it = cells_.find({split, condition});
  require(it != cells_.end(),
          str_cat("WERReport: no cell for (", split, ", ", condition, ")"));
  return it->second;
}

double WERReport::wer_percent(const std::string& split,
                              const std::string& condition) const {
  return cell(split, condition).percent();
}

double WERReport::average_percent(const std::string& split) const {
  WerCounts pooled;
  for (const auto& c : conditions_) {
    auto it = cells_.find({split, c});
    if (it != cells_.end()) pooled += it->second;
  }
  return pooled.percent();
}

nlohmann::json WERReport::to_json() const {
  nlohmann::json j;
  j["conditions"] = conditions_;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [key, c] : cells_) {
    nlohmann::json cj;
    cj["split"] = key.first;
    cj["condition"] = key.second;
    cj["substitutions"] = c.substitutions;
    cj["deletions"] = c.deletions;
    cj["insertions"] = c.insertions;
    cj["ref_words"] = c.ref_words;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

WERReport WERReport::from_json(const nlohmann::json& j) {
  WERReport r(j.at("conditions").get<std::vector<std::string>>());
  for (const auto& cj : j.at("cells")) {
    WerCounts c;
    c.substitutions = cj.at("substitutions").get<long>();
    c.deletions = cj.at("deletions").get<long>();
    c.insertions = cj.at("insertions").get<long>();
    c.ref_words = cj.at("ref_words").get<long>();
    r.add(cj.at("split").get<std::string>(),
          cj.at("condition").get<std::string>(), c);
  }
  return r;
}

bool WERReport::operator==(const WERReport& o) const {
  if (conditions_ != o.conditions_) return false;
  if (cells_.size() != o.cells_.size()) return false;
  for (const auto& [key, c] : cells_) {
    auto it = o.cells_.find(key);
    if (it == o.cells_.end()) return false;
    if (c.substitutions != it->second.substitutions ||
        c.deletions != it->second.deletions ||
        c.insertions != it->second.insertions ||
        c.ref_words != it->second.ref_words)
      return false;
  }
  return true;
}

nlohmann::json AblationRow::to_json() const {
  nlohmann::json j;
  j["exp_id"] = exp_id;
  j["axis_point"] = axis_point;
  j["failed"] = failed;
  j["error"] = error;
  j["report"] = report.to_json();
  j["trainable_adapter_params"] = trainable_adapter_params;
  j["trainable_frontend_params"] = trainable_frontend_params;
  return j;
}

AblationRow AblationRow::from_json(const nlohmann::json& j) {
  AblationRow r;
  r.exp_id = j.at("exp_id").get<std::string>();
  r.axis_point = j.at("axis_point").get<std::string>();
  r.failed = j.at("failed").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.report = WERReport::from_json(j.at("report"));
  r.trainable_adapter_params = j.value("trainable_adapter_params", 0L);
  r.trainable_frontend_params = j.value("trainable_frontend_params", 0L);
  return r;
}

bool AblationReport::any_failed() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const AblationRow& r) { return r.failed; });
}

namespace {

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string render_report_csv(const AblationReport& report) {
  std::string out = "exp_id,axis_point,split";
  for (const auto& c : report.conditions) out += "," + c;
  out += ",avg\n";
  for (const auto& row : report.rows) {
    for (const auto& split : report.splits) {
      out += row.exp_id + "," + row.axis_point + "," + split;
      if (row.failed) {
        for (size_t i = 0; i < report.conditions.size() + 1; ++i)
          out += ",FAILED";
      } else {
        for (const auto& c : report.conditions) {
          out += ",";
          if (row.report.has_cell(split, c))
            out += one_decimal(row.report.wer_percent(split, c));
        }
        out += "," + one_decimal(row.report.average_percent(split));
      }
      out += "\n";
    }
  }
  return out;
}

std::string render_report_text(const AblationReport& report) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"exp", "point", "split"};
  for (const auto& c : report.conditions) header.push_back(c);
  header.push_back("avg");
  grid.push_back(header);
  for (const auto& row : report.rows) {
    for (const auto& split : report.splits) {
      std::vector<std::string> line{row.exp_id, row.axis_point, split};
      if (row.failed) {
        for (size_t i = 0; i < report.conditions.size() + 1; ++i)
          line.push_back("FAILED");
      } else {
        for (const auto& c : report.conditions)
          line.push_back(row.report.has_cell(split, c)
                             ? one_decimal(row.report.wer_percent(split, c))
                             : "-");
        line.push_back(one_decimal(row.report.average_percent(split)));
      }
      grid.push_back(std::move(line));
    }
  }
  std::vector<size_t> widths(grid[0].size(), 0);
  for (const auto& line : grid)
    for (size_t i = 0; i < line.size(); ++i)
      widths[i] = std::max(widths[i], line[i].size());
  std::string out;
  for (const auto& line : grid) {
    for (size_t i = 0; i < line.size(); ++i) {
      out += line[i];
      out.append(widths[i] - line[i].size() + 2, ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

void write_report_files(const AblationReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream csv((std::filesystem::path(dir) / "report.csv").string());
  csv << render_report_csv(report);
  std::ofstream txt((std::filesystem::path(dir) / "report.txt").string());
  txt << render_report_text(report);
  require(csv.good() && txt.good(),
          str_cat("write_report_files: short write under ", dir));
}

}  // namespace adaptasr::eval
