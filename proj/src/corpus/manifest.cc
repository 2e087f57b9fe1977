// corpus/manifest.cc

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

#include "corpus/manifest.h"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "core/util.h"
#include "json.hpp"

namespace adaptasr::corpus {

using nlohmann::json;

std::string split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::eval: return "eval";
  }
  return "train";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "eval") return Split::eval;
  throw std::invalid_argument(str_cat("unknown split: ", s));
}

bool Manifest::has_condition(const std::string& c) const {
  return std::find(conditions_.begin(), conditions_.end(), c) !=
         conditions_.end();
}

void Manifest::append(UtteranceRecord rec) {
  for (const auto& r : records_) {
    require(r.id != rec.id,
            str_cat("manifest: duplicate utterance id '", rec.id, "'"));
  }
  require(has_condition(rec.condition),
          str_cat("manifest: record '", rec.id, "' has condition '",
                  rec.condition, "' outside the declared set"));
  if (rec.is_real) {
    require(!rec.snr_db.has_value(),
            str_cat("manifest: real record '", rec.id, "' must not carry snr_db"));
  } else {
    require(rec.snr_db.has_value(),
            str_cat("manifest: simulated record '", rec.id,
                    "' must carry snr_db"));
  }
  records_.push_back(std::move(rec));
}

Manifest Manifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(str_cat("manifest: cannot open ", path));
  Manifest m;
  std::string line;
  size_t line_no = 0;
  std::unordered_set<std::string> seen;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(
          str_cat("manifest: ", path, " line ", line_no, ": ", e.what()));
    }
    if (!have_header && j.contains("conditions")) {
      m.conditions_ = j.at("conditions").get<std::vector<std::string>>();
      have_header = true;
      continue;
    }
    UtteranceRecord r;
    r.id = j.at("id").get<std::string>();
    r.audio_path = j.at("audio_path").get<std::string>();
    r.transcript = j.at("transcript").get<std::string>();
    r.condition = j.at("condition").get<std::string>();
    r.is_real = j.at("is_real").get<bool>();
    r.split = parse_split(j.at("split").get<std::string>());
    if (j.contains("snr_db") && !j.at("snr_db").is_null())
      r.snr_db = j.at("snr_db").get<double>();
    if (j.contains("clean_path") && !j.at("clean_path").is_null())
      r.clean_path = j.at("clean_path").get<std::string>();
    if (!have_header && !m.has_condition(r.condition))
      m.conditions_.push_back(r.condition);  // implicit declaration
    require(!seen.count(r.id),
            str_cat("manifest: duplicate utterance id '", r.id, "' in ", path));
    seen.insert(r.id);
    require(m.has_condition(r.condition),
            str_cat("manifest: record '", r.id, "' has condition '",
                    r.condition, "' outside the declared set"));
    require(r.is_real != r.snr_db.has_value(),
            str_cat("manifest: record '", r.id,
                    "': snr_db must be present exactly when is_real is false"));
    m.records_.push_back(std::move(r));
  }
  return m;
}

void Manifest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(str_cat("manifest: cannot write ", path));
  json header;
  header["conditions"] = conditions_;
  out << header.dump() << "\n";
  for (const auto& r : records_) {
    json j;
    j["id"] = r.id;
    j["audio_path"] = r.audio_path;
    j["transcript"] = r.transcript;
    j["condition"] = r.condition;
    j["is_real"] = r.is_real;
    j["split"] = split_name(r.split);
    if (r.snr_db) j["snr_db"] = *r.snr_db;
    if (r.clean_path) j["clean_path"] = *r.clean_path;
    out << j.dump() << "\n";
  }
  require(out.good(), str_cat("manifest: short write to ", path));
}

std::vector<UtteranceRecord> Manifest::split_records(Split s) const {
  std::vector<UtteranceRecord> out;
  for (const auto& r : records_)
    if (r.split == s) out.push_back(r);
  return out;
}

}  // namespace adaptasr::corpus
