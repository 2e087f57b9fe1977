// training/checkpoint.cc

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

#include "training/checkpoint.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "core/util.h"

namespace adaptasr::training {

namespace {

constexpr char kMagic[8] = {'A', 'A', 'S', 'R', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

nlohmann::json meta_to_json(const CheckpointMeta& m) {
  nlohmann::json j;
  j["config_hash"] = m.config_hash;
  j["step"] = m.step;
  j["epoch"] = m.epoch;
  j["dev_metric"] = m.dev_metric;
  j["component_tags"] = m.component_tags;
  j["backbone_hash"] = m.backbone_hash;
  j["extra"] = m.extra;
  return j;
}

CheckpointMeta meta_from_json(const nlohmann::json& j) {
  CheckpointMeta m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.step = j.at("step").get<long>();
  m.epoch = j.at("epoch").get<int>();
  m.dev_metric = j.at("dev_metric").get<double>();
  m.component_tags = j.at("component_tags").get<std::vector<std::string>>();
  m.backbone_hash = j.value("backbone_hash", std::string());
  m.extra = j.value("extra", nlohmann::json::object());
  return m;
}

struct Header {
  CheckpointMeta meta;
  std::vector<std::tuple<std::string, int, int>> shapes;
  size_t data_offset = 0;
};

Header read_header(std::ifstream& in, const std::string& path) {
  char magic[8];
  uint32_t version = 0;
  uint64_t json_len = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&json_len), 8);
  require(in.good() && std::memcmp(magic, kMagic, 8) == 0,
          str_cat("checkpoint: ", path, " is not a checkpoint file"));
  require(version == kVersion,
          str_cat("checkpoint: unsupported version ", version, " in ", path));
  std::string json_text(json_len, '\0');
  in.read(json_text.data(), static_cast<std::streamsize>(json_len));
  require(in.good(), str_cat("checkpoint: truncated header in ", path));
  const auto j = nlohmann::json::parse(json_text);
  Header h;
  h.meta = meta_from_json(j.at("meta"));
  for (const auto& p : j.at("params")) {
    h.shapes.emplace_back(p.at("name").get<std::string>(),
                          p.at("rows").get<int>(), p.at("cols").get<int>());
  }
  h.data_offset = 20 + json_len;
  return h;
}

}  // namespace

void Checkpoint::save(const std::string& path) const {
  nlohmann::json j;
  j["meta"] = meta_to_json(meta);
  nlohmann::json plist = nlohmann::json::array();
  for (const auto& [name, m] : params) {
    nlohmann::json p;
    p["name"] = name;
    p["rows"] = m.rows();
    p["cols"] = m.cols();
    plist.push_back(std::move(p));
  }
  j["params"] = std::move(plist);
  const std::string header = j.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error(str_cat("checkpoint: cannot write ", path));
  out.write(kMagic, 8);
  const uint32_t version = kVersion;
  const uint64_t json_len = header.size();
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&json_len), 8);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& [name, m] : params) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  require(out.good(), str_cat("checkpoint: short write to ", path));
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(str_cat("checkpoint: cannot open ", path));
  const Header h = read_header(in, path);
  Checkpoint c;
  c.meta = h.meta;
  for (const auto& [name, rows, cols] : h.shapes) {
    Mat m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    require(in.good(), str_cat("checkpoint: truncated data in ", path));
    c.params.emplace(name, std::move(m));
  }
  return c;
}

CheckpointMeta Checkpoint::load_meta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(str_cat("checkpoint: cannot open ", path));
  return read_header(in, path).meta;
}

Checkpoint average_checkpoints(const std::vector<Checkpoint>& checkpoints) {
  require(!checkpoints.empty(), "average_checkpoints: empty list");
  const Checkpoint& first = checkpoints.front();
  Checkpoint out;
  out.meta = first.meta;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& c : checkpoints) {
    require(c.meta.config_hash == first.meta.config_hash,
            "average_checkpoints: config hash mismatch");
    require(c.params.size() == first.params.size(),
            "average_checkpoints: parameter name sets differ");
    steps.push_back(c.meta.step);
  }
  out.meta.extra["averaged_from_steps"] = std::move(steps);

  const double inv = 1.0 / static_cast<double>(checkpoints.size());
  for (const auto& [name, m] : first.params) {
    Mat acc(m.rows(), m.cols());
    for (const auto& c : checkpoints) {
      auto it = c.params.find(name);
      require(it != c.params.end(),
              str_cat("average_checkpoints: parameter '", name,
                      "' missing from one checkpoint"));
      require(it->second.same_shape(m),
              str_cat("average_checkpoints: shape mismatch for '", name, "'"));
      for (size_t i = 0; i < acc.size(); ++i)
        acc.data()[i] += it->second.data()[i];
    }
    for (size_t i = 0; i < acc.size(); ++i) acc.data()[i] *= inv;
    out.params.emplace(name, std::move(acc));
  }
  return out;
}

CheckpointStore::CheckpointStore(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string CheckpointStore::add(const Checkpoint& ckpt) {
  const std::string path =
      (std::filesystem::path(dir_) /
       str_cat("ckpt_epoch", ckpt.meta.epoch, ".ckpt"))
          .string();
  ckpt.save(path);
  return path;
}

std::vector<CheckpointStore::Entry> CheckpointStore::entries() const {
  std::vector<Entry> out;
  if (!std::filesystem::exists(dir_)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    if (!e.is_regular_file() || e.path().extension() != ".ckpt") continue;
    const auto meta = Checkpoint::load_meta(e.path().string());
    out.push_back({e.path().string(), meta.dev_metric, meta.step, meta.epoch});
  }
  std::sort(out.begin(), out.end(),
            [](const Entry& a, const Entry& b) { return a.step < b.step; });
  return out;
}

std::vector<CheckpointStore::Entry> CheckpointStore::select_topk_by_dev(
    int k) const {
  auto all = entries();
  require(static_cast<int>(all.size()) >= k,
          str_cat("select_topk_by_dev: requested ", k, " checkpoints, store has ",
                  all.size()));
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.dev_metric != b.dev_metric) return a.dev_metric < b.dev_metric;
    return a.step < b.step;
  });
  all.resize(k);
  return all;
}

void CheckpointStore::prune_to_topk(int k) {
  auto all = entries();
  if (static_cast<int>(all.size()) <= k) return;
  const auto keep = select_topk_by_dev(k);
  for (const auto& e : all) {
    const bool kept = std::any_of(keep.begin(), keep.end(), [&](const Entry& x) {
      return x.path == e.path;
    });
    if (!kept) std::filesystem::remove(e.path);
  }
}

}  // namespace adaptasr::training
