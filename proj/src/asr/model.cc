// asr/model.cc

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

#include "asr/model.h"

#include <cmath>

#include "features/tokenizer.h"

namespace adaptasr::asr {

using features::Tokenizer;
using tape::Graph;

Mat absolute_positions(int len, int dim) {
  Mat pe(len, dim);
  for (int p = 0; p < len; ++p) {
    for (int i = 0; i < dim / 2; ++i) {
      const double freq = std::pow(10000.0, -2.0 * i / dim);
      pe(p, 2 * i) = std::sin(p * freq);
      pe(p, 2 * i + 1) = std::cos(p * freq);
    }
  }
  return pe;
}

Mat relative_positions(int t, int dim) {
  Mat pe(2 * t - 1, dim);
  for (int m = 0; m < 2 * t - 1; ++m) {
    const double pos = static_cast<double>(t - 1 - m);
    for (int i = 0; i < dim / 2; ++i) {
      const double freq = std::pow(10000.0, -2.0 * i / dim);
      pe(m, 2 * i) = std::sin(pos * freq);
      pe(m, 2 * i + 1) = std::cos(pos * freq);
    }
  }
  return pe;
}

namespace {

void init_linear(tape::ParamStore* store, const std::string& w_name,
                 const std::string& b_name, int in, int out, Rng* rng) {
  tape::glorot_uniform_init(&store->create(w_name, in, out).value, rng);
  store->create(b_name, 1, out);
}

}  // namespace

Model::Model(const ModelConfig& cfg, uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(derive_seed(seed, {0x6d6f64656cULL}));
  const int d = cfg_.attn_dim, ff = cfg_.ff_units, c = cfg_.conv_channels;
  const int f2 = cfg_.subsampled_freq();

  auto make_norm = [&](const std::string& prefix, int width) {
    backbone_.create(prefix + ".gamma", 1, width).value.fill(1.0);
    backbone_.create(prefix + ".beta", 1, width);
  };
  auto make_attention = [&](const std::string& prefix, bool relative) {
    init_linear(&backbone_, prefix + ".wq", prefix + ".bq", d, d, &rng);
    init_linear(&backbone_, prefix + ".wk", prefix + ".bk", d, d, &rng);
    init_linear(&backbone_, prefix + ".wv", prefix + ".bv", d, d, &rng);
    init_linear(&backbone_, prefix + ".wo", prefix + ".bo", d, d, &rng);
    if (relative) {
      tape::glorot_uniform_init(&backbone_.create(prefix + ".wpos", d, d).value,
                                &rng);
      tape::normal_init(&backbone_.create(prefix + ".u", 1, d).value, 0.02,
                        &rng);
      tape::normal_init(&backbone_.create(prefix + ".v", 1, d).value, 0.02,
                        &rng);
    }
  };

  // Input norm and two-stage conv subsampling front-end.
  make_norm("enc.input_norm", cfg_.num_mels);
  tape::glorot_uniform_init(
      &backbone_.create("enc.sub.conv1.w", c, 1 * 4 * 4).value, &rng);
  backbone_.create("enc.sub.conv1.b", 1, c);
  tape::glorot_uniform_init(
      &backbone_.create("enc.sub.conv2.w", c, c * 4 * 4).value, &rng);
  backbone_.create("enc.sub.conv2.b", 1, c);
  init_linear(&backbone_, "enc.sub.proj.w", "enc.sub.proj.b", c * f2, d, &rng);

  const bool rel = cfg_.pos_encoding == PosEncoding::relative;
  for (int l = 1; l <= cfg_.num_encoder_layers; ++l) {
    const std::string p = str_cat("enc.l", l, ".");
    make_norm(p + "ffn1.norm", d);
    init_linear(&backbone_, p + "ffn1.w1", p + "ffn1.b1", d, ff, &rng);
    init_linear(&backbone_, p + "ffn1.w2", p + "ffn1.b2", ff, d, &rng);
    make_norm(p + "attn.norm", d);
    make_attention(p + "attn", rel);
    make_norm(p + "conv.norm", d);
    init_linear(&backbone_, p + "conv.pw1.w", p + "conv.pw1.b", d, 2 * d, &rng);
    tape::glorot_uniform_init(
        &backbone_.create(p + "conv.dw.w", d, cfg_.depthwise_kernel).value,
        &rng);
    backbone_.create(p + "conv.dw.b", 1, d);
    make_norm(p + "conv.mid_norm", d);
    init_linear(&backbone_, p + "conv.pw2.w", p + "conv.pw2.b", d, d, &rng);
    make_norm(p + "ffn2.norm", d);
    init_linear(&backbone_, p + "ffn2.w1", p + "ffn2.b1", d, ff, &rng);
    init_linear(&backbone_, p + "ffn2.w2", p + "ffn2.b2", ff, d, &rng);
    make_norm(p + "final_norm", d);
  }

  tape::normal_init(&backbone_.create("dec.embed.w", cfg_.vocab_size, d).value,
                    0.02, &rng);
  for (int l = 1; l <= cfg_.num_decoder_layers; ++l) {
    const std::string p = str_cat("dec.l", l, ".");
    make_norm(p + "self.norm", d);
    make_attention(p + "self", false);
    make_norm(p + "src.norm", d);
    make_attention(p + "src", false);
    make_norm(p + "ffn.norm", d);
    init_linear(&backbone_, p + "ffn.w1", p + "ffn.b1", d, ff, &rng);
    init_linear(&backbone_, p + "ffn.w2", p + "ffn.b2", ff, d, &rng);
  }
  make_norm("dec.final_norm", d);
  init_linear(&backbone_, "dec.out.w", "dec.out.b", d, cfg_.vocab_size, &rng);
}

void Model::insert_adapters(const AdapterSpec& spec, uint64_t seed) {
  require(adapters_ == nullptr, "insert_adapters: adapters already inserted");
  require(spec.in_out_dim == cfg_.attn_dim,
          str_cat("insert_adapters: adapter width ", spec.in_out_dim,
                  " does not match encoder width ", cfg_.attn_dim));
  spec.validate(cfg_.num_encoder_layers);
  adapters_ = std::make_unique<AdapterBank>(spec, seed);
}

void Model::freeze_backbone() {
  backbone_.set_trainable(false);
  frozen_ = true;
}

long Model::count_trainable_params() const {
  long n = static_cast<long>(backbone_.count_trainable());
  if (adapters_) n += static_cast<long>(adapters_->params().count_trainable());
  if (frontend_) n += static_cast<long>(frontend_->params().count_trainable());
  return n;
}

std::vector<std::pair<std::string, tape::Param*>> Model::all_params() {
  std::vector<std::pair<std::string, tape::Param*>> out;
  for (auto& [name, p] : backbone_.map()) out.emplace_back(name, &p);
  if (adapters_)
    for (auto& [name, p] : adapters_->params().map()) out.emplace_back(name, &p);
  if (frontend_)
    for (auto& [name, p] : frontend_->params().map()) out.emplace_back(name, &p);
  return out;
}

std::vector<std::pair<std::string, tape::Param*>> Model::trainable_params() {
  std::vector<std::pair<std::string, tape::Param*>> out;
  for (auto& [name, p] : all_params())
    if (p->trainable) out.emplace_back(name, p);
  return out;
}

int Model::norm(Graph& g, int x, const std::string& prefix) {
  return g.layer_norm(x, g.param(backbone_.at(prefix + ".gamma")),
                      g.param(backbone_.at(prefix + ".beta")));
}

int Model::linear(Graph& g, int x, const std::string& w_name,
                  const std::string& b_name) {
  return g.add_row(g.matmul(x, g.param(backbone_.at(w_name))),
                   g.param(backbone_.at(b_name)));
}

int Model::feed_forward(Graph& g, int x, const std::string& prefix,
                        bool use_swish) {
  int h = linear(g, x, prefix + ".w1", prefix + ".b1");
  h = use_swish ? g.swish(h) : g.relu(h);
  return linear(g, h, prefix + ".w2", prefix + ".b2");
}

int Model::attention(Graph& g, int q_in, int kv_in, const std::string& prefix,
                     const Mat* mask, bool relative) {
  const int d = cfg_.attn_dim, heads = cfg_.attn_heads, dh = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

  const int q = linear(g, q_in, prefix + ".wq", prefix + ".bq");
  const int k = linear(g, kv_in, prefix + ".wk", prefix + ".bk");
  const int v = linear(g, kv_in, prefix + ".wv", prefix + ".bv");

  int rproj = -1, u = -1, vbias = -1;
  if (relative) {
    const int t = g.value(q_in).rows();
    require(g.value(kv_in).rows() == t,
            "attention: relative positions need equal q/kv length");
    rproj = g.matmul(g.constant(relative_positions(t, d)),
                     g.param(backbone_.at(prefix + ".wpos")));
    u = g.param(backbone_.at(prefix + ".u"));
    vbias = g.param(backbone_.at(prefix + ".v"));
  }

  std::vector<int> contexts(heads);
  for (int h = 0; h < heads; ++h) {
    const int c0 = h * dh, c1 = (h + 1) * dh;
    const int qh = g.slice_cols(q, c0, c1);
    const int kh = g.slice_cols(k, c0, c1);
    const int vh = g.slice_cols(v, c0, c1);
    int scores;
    if (relative) {
      const int uh = g.slice_cols(u, c0, c1);
      const int vbh = g.slice_cols(vbias, c0, c1);
      const int rh = g.slice_cols(rproj, c0, c1);
      const int ac = g.matmul_nt(g.add_row(qh, uh), kh);
      const int bd = g.rel_shift(g.matmul_nt(g.add_row(qh, vbh), rh));
      scores = g.scale(g.add(ac, bd), inv_sqrt);
    } else {
      scores = g.scale(g.matmul_nt(qh, kh), inv_sqrt);
    }
    contexts[h] = g.matmul(g.row_softmax(scores, mask), vh);
  }
  return linear(g, g.concat_cols(contexts), prefix + ".wo", prefix + ".bo");
}

int Model::conv_module(Graph& g, int x, const std::string& prefix) {
  int h = linear(g, x, prefix + ".pw1.w", prefix + ".pw1.b");
  h = g.glu_cols(h);
  h = g.depthwise_conv_time(h, g.param(backbone_.at(prefix + ".dw.w")),
                            g.param(backbone_.at(prefix + ".dw.b")),
                            cfg_.depthwise_kernel,
                            (cfg_.depthwise_kernel - 1) / 2);
  h = norm(g, h, prefix + ".mid_norm");
  h = g.swish(h);
  return linear(g, h, prefix + ".pw2.w", prefix + ".pw2.b");
}

int Model::conformer_layer(Graph& g, int x, int layer) {
  const std::string p = str_cat("enc.l", layer, ".");
  x = g.add(x, g.scale(feed_forward(g, norm(g, x, p + "ffn1.norm"),
                                    p + "ffn1", true),
                       0.5));
  const int xn = norm(g, x, p + "attn.norm");
  x = g.add(x, attention(g, xn, xn, p + "attn", nullptr,
                         cfg_.pos_encoding == PosEncoding::relative));
  x = g.add(x, conv_module(g, norm(g, x, p + "conv.norm"), p + "conv"));
  x = g.add(x, g.scale(feed_forward(g, norm(g, x, p + "ffn2.norm"),
                                    p + "ffn2", true),
                       0.5));
  return norm(g, x, p + "final_norm");
}

int Model::encoder_forward(Graph& g, int feats, EncoderTrace* trace) {
  const Mat& f = g.value(feats);
  require(f.cols() == cfg_.num_mels,
          str_cat("encoder_forward: expected ", cfg_.num_mels,
                  "-dim logmel features, got ", f.cols()));
  const int t_in = f.rows();
  const int t2 = cfg_.subsampled_len(t_in);
  require(t2 >= 1,
          str_cat("encoder_forward: ", t_in,
                  " frames is too short for two stride-2 convolutions (need "
                  "at least 4)"));

  const int c = cfg_.conv_channels, f2 = cfg_.subsampled_freq();
  const int t1 = ModelConfig::conv_stage_out(t_in);

  int x = norm(g, feats, "enc.input_norm");
  x = g.reshape(x, 1, t_in * cfg_.num_mels);
  x = g.relu(g.conv2d(x, g.param(backbone_.at("enc.sub.conv1.w")),
                      g.param(backbone_.at("enc.sub.conv1.b")), 1, t_in,
                      cfg_.num_mels, c, 4, 4, 2, 1));
  x = g.relu(g.conv2d(x, g.param(backbone_.at("enc.sub.conv2.w")),
                      g.param(backbone_.at("enc.sub.conv2.b")), c, t1,
                      ModelConfig::conv_stage_out(cfg_.num_mels), c, 4, 4, 2,
                      1));
  x = g.permute_chw_to_hcw(x, c, t2, f2);
  x = linear(g, x, "enc.sub.proj.w", "enc.sub.proj.b");
  if (cfg_.pos_encoding == PosEncoding::absolute)
    x = g.add(x, g.constant(absolute_positions(t2, cfg_.attn_dim)));

  if (trace) {
    trace->layers.clear();
    trace->t_prime = t2;
  }
  for (int l = 1; l <= cfg_.num_encoder_layers; ++l) {
    x = conformer_layer(g, x, l);
    if (adapters_ && adapters_->has_position(l)) x = adapters_->forward(g, x, l);
    if (trace) trace->layers.push_back(g.value(x));
  }
  return x;
}

int Model::decoder_logits(Graph& g, int memory, const std::vector<int>& tgt_in) {
  const int d = cfg_.attn_dim;
  const int len = static_cast<int>(tgt_in.size());
  int y = g.scale(g.embed(tgt_in, g.param(backbone_.at("dec.embed.w"))),
                  std::sqrt(static_cast<double>(d)));
  y = g.add(y, g.constant(absolute_positions(len, d)));

  Mat causal(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = i + 1; j < len; ++j) causal(i, j) = -1e30;

  for (int l = 1; l <= cfg_.num_decoder_layers; ++l) {
    const std::string p = str_cat("dec.l", l, ".");
    const int yn = norm(g, y, p + "self.norm");
    y = g.add(y, attention(g, yn, yn, p + "self", &causal, false));
    y = g.add(y, attention(g, norm(g, y, p + "src.norm"), memory, p + "src",
                           nullptr, false));
    y = g.add(y, feed_forward(g, norm(g, y, p + "ffn.norm"), p + "ffn", false));
  }
  y = norm(g, y, "dec.final_norm");
  return linear(g, y, "dec.out.w", "dec.out.b");
}

int Model::asr_loss_node(Graph& g, int feats, const std::vector<int>& targets) {
  require(!targets.empty(), "asr loss: empty target sequence");
  for (int t : targets) {
    require(t != Tokenizer::kBlankId,
            "asr loss: target contains the reserved <blank> id");
    require(t != Tokenizer::kSosEosId,
            "asr loss: target contains the reserved <sos/eos> id");
    require(t >= 0 && t < cfg_.vocab_size, "asr loss: target id out of range");
  }
  const int memory = encoder_forward(g, feats);
  std::vector<int> tgt_in(1, Tokenizer::kSosEosId);
  tgt_in.insert(tgt_in.end(), targets.begin(), targets.end());
  std::vector<int> tgt_out(targets);
  tgt_out.push_back(Tokenizer::kSosEosId);
  const int logits = decoder_logits(g, memory, tgt_in);
  return g.label_smoothed_ce(logits, tgt_out, cfg_.label_smoothing);
}

double Model::compute_asr_loss(const Mat& feats,
                               const std::vector<int>& targets) {
  Graph g;
  return g.value(asr_loss_node(g, g.constant(feats), targets))(0, 0);
}

std::vector<int> Model::decode_greedy(const Mat& feats) {
  Graph g;
  EncoderTrace trace;
  const int mem_node = encoder_forward(g, g.constant(feats), &trace);
  const Mat memory = g.value(mem_node);
  const int max_len = 2 * trace.t_prime;

  std::vector<int> prefix(1, Tokenizer::kSosEosId);
  std::vector<int> out;
  for (int step = 0; step < max_len; ++step) {
    Graph gd;
    const int logits = decoder_logits(gd, gd.constant(memory), prefix);
    const Mat& l = gd.value(logits);
    const int last = l.rows() - 1;
    int best = 0;
    for (int v = 1; v < l.cols(); ++v)
      if (l(last, v) > l(last, best)) best = v;
    if (best == Tokenizer::kSosEosId) break;
    out.push_back(best);
    prefix.push_back(best);
  }
  return out;
}

}  // namespace adaptasr::asr
