// cli/run_config.cc

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

#include "cli/run_config.h"

#include <fstream>
#include <set>

#include "core/util.h"

namespace adaptasr::cli {

using nlohmann::json;

namespace {

// Tracks consumed keys so anything left over is rejected by name.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), str_cat("config: ", path_, " must be an object"));
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(
          str_cat("config: bad value for ", path_, ".", key, ": ", e.what()));
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  json sub(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? j_.at(key) : json::object();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      require(seen_.count(key) > 0,
              str_cat("config: unknown key '",
                      path_.empty() ? key : path_ + "." + key, "'"));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  Section root(j, "");
  require(root.has("seed"), "config: mandatory key 'seed' is missing");
  c.seed = root.get<uint64_t>("seed", 0);

  {
    Section s(root.sub("corpus"), "corpus");
    c.conditions = s.get("conditions", c.conditions);
    c.snr_min_db = s.get("snr_min_db", c.snr_min_db);
    c.snr_max_db = s.get("snr_max_db", c.snr_max_db);
    const std::string pol = s.get<std::string>("noise_offset_policy", "random");
    require(pol == "random" || pol == "fixed_zero",
            "config: corpus.noise_offset_policy must be random or fixed_zero");
    c.offset_policy = pol == "random" ? corpus::NoiseOffsetPolicy::random
                                      : corpus::NoiseOffsetPolicy::fixed_zero;
    c.mixes_per_clean = s.get("mixes_per_clean", c.mixes_per_clean);
    s.finish();
    require(c.snr_min_db <= c.snr_max_db,
            "config: corpus.snr_min_db must not exceed snr_max_db");
    require(!c.conditions.empty(), "config: corpus.conditions is empty");
  }
  {
    Section s(root.sub("features"), "features");
    c.features.win_length = s.get("win_length", c.features.win_length);
    c.features.hop_length = s.get("hop_length", c.features.hop_length);
    c.features.fft_size = s.get("fft_size", c.features.fft_size);
    c.features.num_mels = s.get("num_mels", c.features.num_mels);
    c.features.fmin_hz = s.get("fmin_hz", c.features.fmin_hz);
    c.features.fmax_hz = s.get("fmax_hz", c.features.fmax_hz);
    c.features.log_floor = s.get("log_floor", c.features.log_floor);
    Section sa(s.sub("spec_aug"), "features.spec_aug");
    c.spec_aug.num_freq_masks = sa.get("num_freq_masks", c.spec_aug.num_freq_masks);
    c.spec_aug.max_freq_width = sa.get("max_freq_width", c.spec_aug.max_freq_width);
    c.spec_aug.num_time_masks = sa.get("num_time_masks", c.spec_aug.num_time_masks);
    c.spec_aug.max_time_width = sa.get("max_time_width", c.spec_aug.max_time_width);
    sa.finish();
    s.finish();
  }
  {
    Section s(root.sub("model"), "model");
    c.model.num_encoder_layers =
        s.get("num_encoder_layers", c.model.num_encoder_layers);
    c.model.num_decoder_layers =
        s.get("num_decoder_layers", c.model.num_decoder_layers);
    c.model.attn_dim = s.get("attn_dim", c.model.attn_dim);
    c.model.attn_heads = s.get("attn_heads", c.model.attn_heads);
    c.model.ff_units = s.get("ff_units", c.model.ff_units);
    c.model.subsample_rate = s.get("subsample_rate", c.model.subsample_rate);
    const std::string pos = s.get<std::string>("pos_encoding", "relative");
    require(pos == "relative" || pos == "absolute",
            "config: model.pos_encoding must be relative or absolute");
    c.model.pos_encoding = pos == "relative" ? asr::PosEncoding::relative
                                             : asr::PosEncoding::absolute;
    c.model.conv_channels = s.get("conv_channels", c.model.conv_channels);
    c.model.depthwise_kernel = s.get("depthwise_kernel", c.model.depthwise_kernel);
    c.model.label_smoothing = s.get("label_smoothing", c.model.label_smoothing);
    s.finish();
    c.model.num_mels = c.features.num_mels;
  }
  {
    Section s(root.sub("adapter"), "adapter");
    c.adapter_positions = s.get("positions", c.adapter_positions);
    c.adapter_emb_dim = s.get("emb_dim", c.adapter_emb_dim);
    c.adapter_activation = s.get("activation", c.adapter_activation);
    require(c.adapter_activation == "relu" || c.adapter_activation == "swish",
            "config: adapter.activation must be relu or swish");
    s.finish();
  }
  {
    Section s(root.sub("frontend"), "frontend");
    c.frontend_type = s.get("type", c.frontend_type);
    require(c.frontend_type == "none" || c.frontend_type == "masknet" ||
                c.frontend_type == "demucs_lite",
            "config: frontend.type must be none, masknet or demucs_lite");
    Section m(s.sub("masknet"), "frontend.masknet");
    c.masknet.num_layers = m.get("num_layers", c.masknet.num_layers);
    c.masknet.hidden = m.get("hidden", c.masknet.hidden);
    m.finish();
    Section d(s.sub("demucs"), "frontend.demucs");
    c.demucs.depth = d.get("depth", c.demucs.depth);
    c.demucs.base_channels = d.get("base_channels", c.demucs.base_channels);
    c.demucs.kernel = d.get("kernel", c.demucs.kernel);
    c.demucs.stride = d.get("stride", c.demucs.stride);
    d.finish();
    c.lambda_se = s.get("lambda_se", c.lambda_se);
    c.se_loss = s.get("se_loss", c.se_loss);
    require(c.se_loss == "l1" || c.se_loss == "l2",
            "config: frontend.se_loss must be l1 or l2");
    s.finish();
  }
  {
    const json train_j = root.sub("train");
    Section s(train_j, "train");
    c.pretrain_epochs = s.get("pretrain_epochs", c.pretrain_epochs);
    c.adapt_epochs = s.get("adapt_epochs", c.adapt_epochs);
    c.batch_size = s.get("batch_size", c.batch_size);
    c.keep_topk = s.get("keep_topk", c.keep_topk);
    c.optim.peak_lr = s.get("peak_lr", c.optim.peak_lr);
    c.optim.warmup_steps = s.get("warmup_steps", c.optim.warmup_steps);
    c.optim.grad_clip = s.get("grad_clip", c.optim.grad_clip);
    const json regime_j = s.sub("regime");
    Section r(regime_j, "train.regime");
    c.regime.real_count = r.get("real_count", c.regime.real_count);
    c.regime.simu_count = r.get("simu_count", c.regime.simu_count);
    if (r.has("held_out_condition") &&
        !regime_j.at("held_out_condition").is_null()) {
      c.regime.held_out_condition =
          regime_j.at("held_out_condition").get<std::string>();
    }
    if (r.has("multi_condition_quota") &&
        !regime_j.at("multi_condition_quota").is_null()) {
      c.regime.multi_condition_quota =
          regime_j.at("multi_condition_quota").get<int>();
    }
    r.finish();
    s.finish();
  }
  {
    Section s(root.sub("eval"), "eval");
    c.eval_split = s.get("split", c.eval_split);
    c.regime_counts = s.get("regime_counts", c.regime_counts);
    s.finish();
  }
  root.finish();

  c.regime.seed = c.seed;
  require(c.seed != 0, "config: seed must be nonzero");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(str_cat("config: cannot open ", path));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(str_cat("config: ", path, ": ", e.what()));
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["corpus"] = {
      {"conditions", conditions},
      {"snr_min_db", snr_min_db},
      {"snr_max_db", snr_max_db},
      {"noise_offset_policy",
       offset_policy == corpus::NoiseOffsetPolicy::random ? "random"
                                                          : "fixed_zero"},
      {"mixes_per_clean", mixes_per_clean}};
  j["features"] = {{"win_length", features.win_length},
                   {"hop_length", features.hop_length},
                   {"fft_size", features.fft_size},
                   {"num_mels", features.num_mels},
                   {"fmin_hz", features.fmin_hz},
                   {"fmax_hz", features.fmax_hz},
                   {"log_floor", features.log_floor},
                   {"spec_aug",
                    {{"num_freq_masks", spec_aug.num_freq_masks},
                     {"max_freq_width", spec_aug.max_freq_width},
                     {"num_time_masks", spec_aug.num_time_masks},
                     {"max_time_width", spec_aug.max_time_width}}}};
  j["model"] = {{"num_encoder_layers", model.num_encoder_layers},
                {"num_decoder_layers", model.num_decoder_layers},
                {"attn_dim", model.attn_dim},
                {"attn_heads", model.attn_heads},
                {"ff_units", model.ff_units},
                {"subsample_rate", model.subsample_rate},
                {"pos_encoding", model.pos_encoding == asr::PosEncoding::relative
                                     ? "relative"
                                     : "absolute"},
                {"conv_channels", model.conv_channels},
                {"depthwise_kernel", model.depthwise_kernel},
                {"label_smoothing", model.label_smoothing}};
  j["adapter"] = {{"positions", adapter_positions},
                  {"emb_dim", adapter_emb_dim},
                  {"activation", adapter_activation}};
  j["frontend"] = {{"type", frontend_type},
                   {"masknet",
                    {{"num_layers", masknet.num_layers},
                     {"hidden", masknet.hidden}}},
                   {"demucs",
                    {{"depth", demucs.depth},
                     {"base_channels", demucs.base_channels},
                     {"kernel", demucs.kernel},
                     {"stride", demucs.stride}}},
                   {"lambda_se", lambda_se},
                   {"se_loss", se_loss}};
  json regime_j = {{"real_count", regime.real_count},
                   {"simu_count", regime.simu_count}};
  if (regime.held_out_condition)
    regime_j["held_out_condition"] = *regime.held_out_condition;
  if (regime.multi_condition_quota)
    regime_j["multi_condition_quota"] = *regime.multi_condition_quota;
  j["train"] = {{"pretrain_epochs", pretrain_epochs},
                {"adapt_epochs", adapt_epochs},
                {"batch_size", batch_size},
                {"keep_topk", keep_topk},
                {"peak_lr", optim.peak_lr},
                {"warmup_steps", optim.warmup_steps},
                {"grad_clip", optim.grad_clip},
                {"regime", std::move(regime_j)}};
  j["eval"] = {{"split", eval_split}, {"regime_counts", regime_counts}};
  return j;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

asr::AdapterSpec RunConfig::adapter_spec() const {
  asr::AdapterSpec s;
  s.positions = adapter_positions;
  s.emb_dim = adapter_emb_dim;
  s.in_out_dim = model.attn_dim;
  s.activation = adapter_activation == "relu" ? asr::AdapterActivation::relu
                                              : asr::AdapterActivation::swish;
  return s;
}

training::TrainPlan RunConfig::pretrain_plan() const {
  training::TrainPlan p;
  p.phase = training::Phase::pretrain;
  p.epochs = pretrain_epochs;
  p.batch_size = batch_size;
  p.optim = optim;
  p.seed = seed;
  p.spec_aug = spec_aug;
  p.keep_topk = keep_topk;
  return p;
}

training::TrainPlan RunConfig::adapt_plan() const {
  training::TrainPlan p;
  p.phase = frontend_type == "none" ? training::Phase::adapt
                                    : training::Phase::adapt_with_se;
  p.epochs = adapt_epochs;
  p.batch_size = batch_size;
  p.optim = optim;
  p.seed = seed;
  p.regime = regime;
  p.adapter_spec = adapter_spec();
  p.keep_topk = keep_topk;
  p.lambda_se = lambda_se;
  p.se_loss = se_loss_kind();
  return p;
}

enhancement::SELossKind RunConfig::se_loss_kind() const {
  return se_loss == "l1" ? enhancement::SELossKind::l1
                         : enhancement::SELossKind::l2;
}

}  // namespace adaptasr::cli
