// tools/adaptasr_main.cc

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

// adaptasr: adapter-based noise adaptation toolkit.
//
//   adaptasr mix       --config cfg.json --clean-dir D --noise-dir N \
//                      --out-manifest M [--out-wav-dir W] [--split train]
//   adaptasr pretrain  --config cfg.json --manifest M
//   adaptasr adapt     --config cfg.json --manifest M --backbone CKPT
//   adaptasr evaluate  --config cfg.json --manifest M --checkpoint CKPT \
//                      [--backbone CKPT] [--split dev]
//   adaptasr ablate    --config cfg.json --manifest M --backbone CKPT \
//                      --axis {position,emb_dim,data_regime,se_system}
//   adaptasr report    --run-dir DIR
//
// Global flags: --config PATH, --seed INT, --workers INT, --out DIR.
// ADAPT_ASR_HOME sets the default output root.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli/run_config.h"
#include "corpus/wav.h"
#include "eval/ablation.h"
#include "eval/evaluate.h"
#include "kernels/kernels.h"
#include "training/trainer.h"

using namespace adaptasr;
namespace fs = std::filesystem;

namespace {

std::string default_out_root() {
  const char* home = std::getenv("ADAPT_ASR_HOME");
  if (home && *home) return home;
  return "adaptasr_runs";
}

// Run directories are append-only: a fresh hash+timestamp+pid name per run.
std::string make_run_dir(const std::string& out_root, const std::string& cmd,
                         const std::string& cfg_hash) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch())
                      .count() %
                  1000;
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::localtime(&t));
  const std::string dir =
      (fs::path(out_root) / str_cat(cmd, "-", cfg_hash.substr(0, 8), "-",
                                    stamp, ".", ms, "-", ::getpid()))
          .string();
  fs::create_directories(dir);
  return dir;
}

std::vector<fs::path> wav_files(const std::string& dir) {
  require(fs::is_directory(dir), str_cat("not a directory: ", dir));
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav")
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  require(!out.empty(), str_cat("no .wav files under ", dir));
  return out;
}

std::string transcript_for(const fs::path& wav) {
  fs::path txt = wav;
  txt.replace_extension(".txt");
  if (!fs::exists(txt)) return "";
  std::ifstream in(txt);
  std::string line, text;
  while (std::getline(in, line)) {
    if (!text.empty()) text += " ";
    text += line;
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\n'))
    text.pop_back();
  return text;
}

features::Tokenizer tokenizer_from_manifest(const corpus::Manifest& manifest) {
  std::vector<std::string> texts;
  for (const auto& r : manifest.records()) texts.push_back(r.transcript);
  return features::Tokenizer::build(texts);
}

features::Tokenizer tokenizer_from_checkpoint(
    const training::Checkpoint& ckpt) {
  require(ckpt.meta.extra.contains("tokenizer"),
          "checkpoint carries no tokenizer table");
  return features::Tokenizer::deserialize(
      ckpt.meta.extra.at("tokenizer").get<std::string>());
}

training::Checkpoint load_backbone_or_die(const std::string& path) {
  require(!path.empty(),
          "missing prerequisite: a pretrained backbone checkpoint is required "
          "(--backbone PATH)");
  require(fs::exists(path),
          str_cat("missing prerequisite: backbone checkpoint not found at ",
                  path));
  return training::Checkpoint::load(path);
}

int cmd_mix(const cli::RunConfig& cfg, const std::string& clean_dir,
            const std::string& noise_dir, const std::string& out_manifest,
            std::string out_wav_dir, const std::string& split) {
  if (out_wav_dir.empty())
    out_wav_dir = fs::path(out_manifest).parent_path() / "mixed_wavs";
  fs::create_directories(out_wav_dir);

  const auto cleans = wav_files(clean_dir);
  const auto noises = wav_files(noise_dir);
  std::vector<corpus::Waveform> noise_waves;
  for (const auto& n : noises) noise_waves.push_back(corpus::load_wav(n.string()));

  std::vector<std::string> conditions;
  for (const auto& n : noises) conditions.push_back(n.stem().string());
  corpus::Manifest manifest(conditions);

  for (size_t ci = 0; ci < cleans.size(); ++ci) {
    const auto clean = corpus::load_wav(cleans[ci].string());
    const std::string text = transcript_for(cleans[ci]);
    for (int k = 0; k < cfg.mixes_per_clean; ++k) {
      const uint64_t mix_seed = derive_seed(cfg.seed, {0x6d6978ULL, ci, (uint64_t)k});
      Rng rng(mix_seed);
      const size_t ni = static_cast<size_t>(rng.uniform_int(noises.size()));
      const double snr = cfg.snr_min_db == cfg.snr_max_db
                             ? cfg.snr_min_db
                             : rng.uniform(cfg.snr_min_db, cfg.snr_max_db);
      const auto mixed = corpus::mix_at_snr(clean, noise_waves[ni], snr,
                                            mix_seed, cfg.offset_policy);
      corpus::UtteranceRecord rec;
      rec.id = str_cat(cleans[ci].stem().string(), "__",
                       noises[ni].stem().string(), "__mix", k);
      rec.audio_path = (fs::path(out_wav_dir) / (rec.id + ".wav")).string();
      rec.transcript = text;
      rec.condition = noises[ni].stem().string();
      rec.is_real = false;
      rec.snr_db = snr;
      rec.split = corpus::parse_split(split);
      rec.clean_path = cleans[ci].string();
      corpus::write_wav(rec.audio_path, mixed.noisy);
      manifest.append(std::move(rec));
    }
  }
  manifest.save(out_manifest);
  std::printf("wrote %zu records to %s\n", manifest.records().size(),
              out_manifest.c_str());
  return 0;
}

int cmd_pretrain(const cli::RunConfig& cfg, const std::string& manifest_path,
                 const std::string& out_root) {
  const auto manifest = corpus::Manifest::load(manifest_path);
  const std::string run_dir = make_run_dir(out_root, "pretrain", cfg.hash());

  const auto tok = tokenizer_from_manifest(manifest);
  tok.save((fs::path(run_dir) / "tokens.txt").string());
  asr::ModelConfig mcfg = cfg.model;
  mcfg.vocab_size = tok.vocab_size();
  asr::Model model(mcfg, cfg.seed);
  const features::Analyzer analyzer(cfg.features);

  training::Trainer trainer(analyzer, tok);
  training::Checkpoint final =
      trainer.pretrain(model, cfg.pretrain_plan(), manifest, run_dir);
  final.meta.extra["tokenizer"] = tok.serialize();
  final.meta.extra["run_config_hash"] = cfg.hash();
  const std::string final_path = (fs::path(run_dir) / "final.ckpt").string();
  final.save(final_path);
  std::printf("pretrain complete: %s\n", final_path.c_str());
  return 0;
}

std::unique_ptr<enhancement::Frontend> make_frontend(const cli::RunConfig& cfg) {
  if (cfg.frontend_type == "masknet") {
    enhancement::MaskNetConfig m = cfg.masknet;
    m.input_bins = cfg.features.fft_size / 2 + 1;
    return std::make_unique<enhancement::MaskNet>(m, cfg.seed);
  }
  if (cfg.frontend_type == "demucs_lite")
    return std::make_unique<enhancement::DemucsLite>(cfg.demucs, cfg.seed);
  return nullptr;
}

int cmd_adapt(const cli::RunConfig& cfg, const std::string& manifest_path,
              const std::string& backbone_path, const std::string& out_root) {
  const auto manifest = corpus::Manifest::load(manifest_path);
  const auto backbone = load_backbone_or_die(backbone_path);
  const auto tok = tokenizer_from_checkpoint(backbone);
  const std::string run_dir = make_run_dir(out_root, "adapt", cfg.hash());

  asr::ModelConfig mcfg = cfg.model;
  mcfg.vocab_size = tok.vocab_size();
  asr::Model model(mcfg, cfg.seed);
  auto frontend = make_frontend(cfg);
  const features::Analyzer analyzer(cfg.features);

  training::Trainer trainer(analyzer, tok);
  training::Checkpoint final = trainer.adapt(model, frontend.get(),
                                             cfg.adapt_plan(), backbone,
                                             manifest, run_dir);
  final.meta.extra["run_config_hash"] = cfg.hash();
  final.meta.extra["backbone_path"] = backbone_path;
  const std::string final_path = (fs::path(run_dir) / "final.ckpt").string();
  final.save(final_path);
  std::printf("adapt complete: %s\n", final_path.c_str());
  return 0;
}

int cmd_evaluate(const cli::RunConfig& cfg, const std::string& manifest_path,
                 const std::string& ckpt_path, const std::string& backbone_path,
                 const std::string& split, const std::string& out_root) {
  const auto manifest = corpus::Manifest::load(manifest_path);
  require(fs::exists(ckpt_path),
          str_cat("missing prerequisite: checkpoint not found at ", ckpt_path));
  const auto ckpt = training::Checkpoint::load(ckpt_path);
  const features::Analyzer analyzer(cfg.features);

  const bool adapted =
      std::find(ckpt.meta.component_tags.begin(), ckpt.meta.component_tags.end(),
                "adapted") != ckpt.meta.component_tags.end();

  std::unique_ptr<asr::Model> model;
  std::unique_ptr<enhancement::Frontend> frontend;
  features::Tokenizer tok = features::Tokenizer::build({});
  if (!adapted) {
    tok = tokenizer_from_checkpoint(ckpt);
    asr::ModelConfig mcfg = cfg.model;
    mcfg.vocab_size = tok.vocab_size();
    model = std::make_unique<asr::Model>(mcfg, cfg.seed);
    training::apply_backbone(ckpt, model.get());
  } else {
    const auto backbone = load_backbone_or_die(backbone_path);
    tok = tokenizer_from_checkpoint(backbone);
    asr::ModelConfig mcfg = cfg.model;
    mcfg.vocab_size = tok.vocab_size();
    model = std::make_unique<asr::Model>(mcfg, cfg.seed);
    training::apply_backbone(backbone, model.get());
    model->freeze_backbone();
    if (ckpt.meta.extra.contains("adapter_spec")) {
      const auto& sj = ckpt.meta.extra.at("adapter_spec");
      asr::AdapterSpec spec;
      spec.positions = sj.at("positions").get<std::vector<int>>();
      spec.emb_dim = sj.at("emb_dim").get<int>();
      spec.in_out_dim = sj.at("in_out_dim").get<int>();
      model->insert_adapters(spec, cfg.seed);
    }
    frontend = make_frontend(cfg);
    if (frontend) model->attach_frontend(frontend.get());
    training::apply_trainables(ckpt, model.get());
  }

  const auto report = eval::evaluate(*model, manifest,
                                     corpus::parse_split(split), analyzer, tok);

  eval::AblationReport wrap;
  wrap.axis = "evaluate";
  wrap.conditions = manifest.conditions();
  wrap.splits = {split};
  eval::AblationRow row;
  row.exp_id = "eval";
  row.axis_point = fs::path(ckpt_path).stem().string();
  row.report = report;
  wrap.rows.push_back(std::move(row));

  const std::string run_dir = make_run_dir(out_root, "evaluate", cfg.hash());
  eval::write_report_files(wrap, run_dir);
  std::fputs(eval::render_report_text(wrap).c_str(), stdout);
  std::printf("report written under %s\n", run_dir.c_str());
  return 0;
}

int cmd_ablate(const cli::RunConfig& cfg, const std::string& manifest_path,
               const std::string& backbone_path, const std::string& axis,
               const std::string& out_root) {
  const auto manifest = corpus::Manifest::load(manifest_path);
  const auto backbone = load_backbone_or_die(backbone_path);
  const auto tok = tokenizer_from_checkpoint(backbone);
  const features::Analyzer analyzer(cfg.features);

  eval::AblationGridConfig grid;
  grid.axis = eval::parse_axis(axis);
  grid.model = cfg.model;
  grid.model.vocab_size = tok.vocab_size();
  grid.plan = cfg.adapt_plan();
  grid.plan.adapter_spec.reset();
  grid.masknet = cfg.masknet;
  grid.masknet.input_bins = cfg.features.fft_size / 2 + 1;
  grid.demucs = cfg.demucs;
  grid.default_positions = cfg.adapter_positions;
  grid.default_emb_dim = cfg.adapter_emb_dim;
  grid.regime_counts = cfg.regime_counts;

  const std::string run_dir = make_run_dir(out_root, "ablate", cfg.hash());
  const auto report = eval::run_ablation(grid, backbone, manifest, analyzer,
                                         tok, run_dir);
  std::fputs(eval::render_report_text(report).c_str(), stdout);
  std::printf("report written under %s\n", run_dir.c_str());
  return report.any_failed() ? 2 : 0;
}

int cmd_report(const std::string& run_dir) {
  const fs::path rows_dir = fs::path(run_dir) / "rows";
  require(fs::is_directory(rows_dir),
          str_cat("missing prerequisite: no rows directory at ",
                  rows_dir.string()));
  eval::AblationReport report;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(rows_dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  require(!files.empty(), str_cat("no row files under ", rows_dir.string()));
  for (const auto& f : files) {
    std::ifstream in(f.string());
    report.rows.push_back(
        eval::AblationRow::from_json(nlohmann::json::parse(in)));
  }
  report.conditions = report.rows.front().report.conditions();
  report.axis = "report";
  eval::write_report_files(report, run_dir);
  std::fputs(eval::render_report_text(report).c_str(), stdout);
  return report.any_failed() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptasr: adapter-based noise adaptation for a compact "
               "Conformer ASR system"};
  app.require_subcommand(1);

  std::string config_path, out_root = default_out_root();
  int64_t seed_override = -1;
  int workers = 0;
  app.add_option("--config", config_path, "Run configuration JSON");
  app.add_option("--seed", seed_override, "Override the config seed");
  app.add_option("--workers", workers, "Kernel thread count (0 = default)");
  app.add_option("--out", out_root, "Output root directory");

  auto* mix = app.add_subcommand("mix", "Mix clean speech with noise at "
                                        "sampled SNRs and write a manifest");
  std::string clean_dir, noise_dir, out_manifest, out_wav_dir, split = "train";
  mix->add_option("--clean-dir", clean_dir)->required();
  mix->add_option("--noise-dir", noise_dir)->required();
  mix->add_option("--out-manifest", out_manifest)->required();
  mix->add_option("--out-wav-dir", out_wav_dir);
  mix->add_option("--split", split);

  auto* pretrain = app.add_subcommand("pretrain", "Train the backbone");
  std::string manifest_path;
  pretrain->add_option("--manifest", manifest_path)->required();

  auto* adapt = app.add_subcommand("adapt", "Frozen-backbone adaptation");
  std::string backbone_path;
  adapt->add_option("--manifest", manifest_path)->required();
  adapt->add_option("--backbone", backbone_path);

  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint");
  std::string ckpt_path, eval_split;
  evaluate->add_option("--manifest", manifest_path)->required();
  evaluate->add_option("--checkpoint", ckpt_path)->required();
  evaluate->add_option("--backbone", backbone_path);
  evaluate->add_option("--split", eval_split);

  auto* ablate = app.add_subcommand("ablate", "Run an ablation grid");
  std::string axis;
  ablate->add_option("--manifest", manifest_path)->required();
  ablate->add_option("--backbone", backbone_path);
  ablate->add_option("--axis", axis)->required();

  auto* report = app.add_subcommand("report", "Re-render a run's report");
  std::string run_dir;
  report->add_option("--run-dir", run_dir)->required();

  CLI11_PARSE(app, argc, argv);
  if (workers > 0) kernels::set_threads(workers);

  try {
    if (report->parsed()) return cmd_report(run_dir);

    require(!config_path.empty(), "missing prerequisite: --config PATH");
    cli::RunConfig cfg = cli::RunConfig::load(config_path);
    if (seed_override >= 0) {
      cfg.seed = static_cast<uint64_t>(seed_override);
      cfg.regime.seed = cfg.seed;
      require(cfg.seed != 0, "config: seed must be nonzero");
    }

    if (mix->parsed())
      return cmd_mix(cfg, clean_dir, noise_dir, out_manifest, out_wav_dir,
                     split);
    if (pretrain->parsed()) return cmd_pretrain(cfg, manifest_path, out_root);
    if (adapt->parsed())
      return cmd_adapt(cfg, manifest_path, backbone_path, out_root);
    if (evaluate->parsed())
      return cmd_evaluate(cfg, manifest_path, ckpt_path, backbone_path,
                          eval_split.empty() ? cfg.eval_split : eval_split,
                          out_root);
    if (ablate->parsed())
      return cmd_ablate(cfg, manifest_path, backbone_path, axis, out_root);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
