// eval/ablation.cc

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

#include "eval/ablation.h"

#include <filesystem>
#include <fstream>

#include "core/util.h"

namespace adaptasr::eval {

namespace fs = std::filesystem;

std::string axis_name(AblationAxis a) {
  switch (a) {
    case AblationAxis::position: return "position";
    case AblationAxis::emb_dim: return "emb_dim";
    case AblationAxis::data_regime: return "data_regime";
    case AblationAxis::se_system: return "se_system";
  }
  return "position";
}

AblationAxis parse_axis(const std::string& s) {
  if (s == "position") return AblationAxis::position;
  if (s == "emb_dim") return AblationAxis::emb_dim;
  if (s == "data_regime") return AblationAxis::data_regime;
  if (s == "se_system") return AblationAxis::se_system;
  throw std::invalid_argument(str_cat("unknown ablation axis: ", s));
}

namespace {

asr::AdapterSpec spec_for(const AblationGridConfig& cfg,
                          const std::vector<int>& positions, int emb_dim) {
  asr::AdapterSpec s;
  s.positions = positions;
  s.emb_dim = emb_dim;
  s.in_out_dim = cfg.model.attn_dim;
  return s;
}

std::string positions_label(const std::vector<int>& positions) {
  if (positions.size() == 1) return str_cat("E", positions.front());
  return str_cat("E", positions.front(), "-E", positions.back());
}

}  // namespace

std::vector<GridPoint> make_grid(const AblationGridConfig& cfg,
                                 const corpus::Manifest& manifest) {
  std::vector<GridPoint> points;
  int exp = 0;
  auto next_id = [&exp]() { return str_cat("exp", ++exp); };

  switch (cfg.axis) {
    case AblationAxis::position: {
      const int L = cfg.model.num_encoder_layers;
      // Single positions from the deepest layer up, then growing stacks
      // from the first layer.
      for (int l = L; l >= 1; --l) {
        GridPoint p;
        p.exp_id = next_id();
        std::vector<int> pos{l};
        p.label = positions_label(pos);
        p.adapter_spec = spec_for(cfg, pos, cfg.default_emb_dim);
        points.push_back(std::move(p));
      }
      for (int upto = 2; upto <= L; ++upto) {
        GridPoint p;
        p.exp_id = next_id();
        std::vector<int> pos;
        for (int l = 1; l <= upto; ++l) pos.push_back(l);
        p.label = positions_label(pos);
        p.adapter_spec = spec_for(cfg, pos, cfg.default_emb_dim);
        points.push_back(std::move(p));
      }
      break;
    }
    case AblationAxis::emb_dim: {
      // The published sweep {16, 32, 64, 96, 128} was run at width 512;
      // scale it to the configured width to keep m < d.
      for (int full : {16, 32, 64, 96, 128}) {
        const int m = std::max(1, full * cfg.model.attn_dim / 512);
        GridPoint p;
        p.exp_id = next_id();
        p.label = str_cat("m", m);
        p.adapter_spec = spec_for(cfg, cfg.default_positions, m);
        points.push_back(std::move(p));
      }
      break;
    }
    case AblationAxis::data_regime: {
      auto base_spec = spec_for(cfg, cfg.default_positions, cfg.default_emb_dim);
      {
        GridPoint p;
        p.exp_id = next_id();
        p.label = "real+simu";
        p.adapter_spec = base_spec;
        points.push_back(std::move(p));
      }
      {
        GridPoint p;
        p.exp_id = next_id();
        p.label = "real-only";
        p.adapter_spec = base_spec;
        p.regime.simu_count = 0;
        points.push_back(std::move(p));
      }
      for (int n : cfg.regime_counts) {
        {
          GridPoint p;
          p.exp_id = next_id();
          p.label = str_cat("held-real", n, "+simu");
          p.adapter_spec = base_spec;
          p.per_condition_held = true;
          p.regime.real_count = n;
          points.push_back(std::move(p));
        }
        {
          GridPoint p;
          p.exp_id = next_id();
          p.label = str_cat("held-real", n);
          p.adapter_spec = base_spec;
          p.per_condition_held = true;
          p.regime.real_count = n;
          p.regime.simu_count = 0;
          points.push_back(std::move(p));
        }
        {
          GridPoint p;
          p.exp_id = next_id();
          p.label = str_cat("held-simu", n);
          p.adapter_spec = base_spec;
          p.per_condition_held = true;
          p.regime.real_count = 0;
          p.regime.simu_count = n;
          points.push_back(std::move(p));
        }
      }
      {
        // Multi-condition row: the smallest count split evenly over the
        // conditions.
        const int conds = static_cast<int>(manifest.conditions().size());
        const int n = cfg.regime_counts.empty() ? conds
                                                : cfg.regime_counts.back();
        const int quota = std::max(1, n / conds);
        GridPoint p;
        p.exp_id = next_id();
        p.label = str_cat("multi-cond-real", quota * conds);
        p.adapter_spec = base_spec;
        p.regime.real_count = quota * conds;
        p.regime.simu_count = 0;
        p.regime.multi_condition_quota = quota;
        points.push_back(std::move(p));
      }
      break;
    }
    case AblationAxis::se_system: {
      for (const auto kind :
           {enhancement::FrontendKind::masknet,
            enhancement::FrontendKind::demucs_lite}) {
        {
          GridPoint p;
          p.exp_id = next_id();
          p.label = frontend_kind_name(kind);
          p.frontend = kind;
          points.push_back(std::move(p));
        }
        {
          GridPoint p;
          p.exp_id = next_id();
          p.label = frontend_kind_name(kind) + "+adapter";
          p.frontend = kind;
          p.adapter_spec =
              spec_for(cfg, cfg.default_positions, cfg.default_emb_dim);
          points.push_back(std::move(p));
        }
      }
      break;
    }
  }
  return points;
}

namespace {

AblationRow run_point(const AblationGridConfig& cfg, const GridPoint& point,
                      const training::Checkpoint& backbone,
                      const corpus::Manifest& manifest,
                      const features::Analyzer& an,
                      const features::Tokenizer& tok,
                      const std::string& point_dir, uint64_t point_seed) {
  AblationRow row;
  row.exp_id = point.exp_id;
  row.axis_point = point.label;
  row.report = WERReport(manifest.conditions());

  auto run_one =
      [&](const std::optional<std::string>& held) {
        asr::Model model(cfg.model, point_seed);
        std::unique_ptr<enhancement::Frontend> frontend;
        if (point.frontend == enhancement::FrontendKind::masknet)
          frontend = std::make_unique<enhancement::MaskNet>(cfg.masknet,
                                                            point_seed);
        else if (point.frontend == enhancement::FrontendKind::demucs_lite)
          frontend = std::make_unique<enhancement::DemucsLite>(cfg.demucs,
                                                               point_seed);

        training::TrainPlan plan = cfg.plan;
        plan.seed = point_seed;
        plan.adapter_spec = point.adapter_spec;
        plan.regime = point.regime;
        plan.regime.seed = point_seed;
        plan.regime.held_out_condition = held;
        plan.phase = frontend ? training::Phase::adapt_with_se
                              : training::Phase::adapt;

        training::Trainer trainer(an, tok);
        const std::string sub_dir =
            held ? (fs::path(point_dir) / *held).string() : point_dir;
        trainer.adapt(model, frontend.get(), plan, backbone, manifest, sub_dir);

        if (model.adapters())
          row.trainable_adapter_params =
              static_cast<long>(model.adapters()->params().count_trainable());
        if (frontend)
          row.trainable_frontend_params =
              static_cast<long>(frontend->params().count_trainable());

        for (const auto split : {corpus::Split::dev, corpus::Split::eval}) {
          const WERReport r = evaluate(model, manifest, split, an, tok, held);
          const std::string split_str = corpus::split_name(split);
          for (const auto& c : manifest.conditions())
            if (r.has_cell(split_str, c))
              row.report.add(split_str, c, r.cell(split_str, c));
        }
      };

  if (point.per_condition_held) {
    for (const auto& c : manifest.conditions()) run_one(c);
  } else {
    run_one(std::nullopt);
  }
  return row;
}

}  // namespace

AblationReport run_ablation(const AblationGridConfig& cfg,
                            const training::Checkpoint& backbone,
                            const corpus::Manifest& manifest,
                            const features::Analyzer& an,
                            const features::Tokenizer& tok,
                            const std::string& run_dir) {
  AblationReport report;
  report.axis = axis_name(cfg.axis);
  report.conditions = manifest.conditions();

  const auto points = make_grid(cfg, manifest);
  require(!points.empty(), "run_ablation: empty grid");
  const fs::path rows_dir = fs::path(run_dir) / "rows";
  fs::create_directories(rows_dir);

  for (size_t i = 0; i < points.size(); ++i) {
    const GridPoint& point = points[i];
    const fs::path row_file = rows_dir / (point.exp_id + ".json");
    if (fs::exists(row_file)) {
      std::ifstream in(row_file.string());
      report.rows.push_back(
          AblationRow::from_json(nlohmann::json::parse(in)));
      continue;
    }
    AblationRow row;
    const uint64_t point_seed =
        derive_seed(cfg.plan.seed, {0x61626cULL, i});
    try {
      row = run_point(cfg, point, backbone, manifest, an, tok,
                      (fs::path(run_dir) / point.exp_id).string(), point_seed);
    } catch (const std::exception& e) {
      row.exp_id = point.exp_id;
      row.axis_point = point.label;
      row.failed = true;
      row.error = e.what();
      row.report = WERReport(manifest.conditions());
    }
    std::ofstream out(row_file.string());
    out << row.to_json().dump(2) << "\n";
    report.rows.push_back(std::move(row));
  }
  write_report_files(report, run_dir);
  return report;
}

}  // namespace adaptasr::eval
