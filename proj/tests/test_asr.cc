// tests/test_asr.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "asr/model.h"
#include "core/rng.h"
#include "doctest.h"
#include "features/tokenizer.h"

using namespace adaptasr;
using namespace adaptasr::asr;
using features::Tokenizer;
using tape::Graph;

namespace {

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.num_encoder_layers = 2;
  cfg.num_decoder_layers = 2;
  cfg.attn_dim = 32;
  cfg.attn_heads = 4;
  cfg.ff_units = 48;
  cfg.conv_channels = 4;
  cfg.vocab_size = 11;
  return cfg;
}

Mat random_feats(int t, int mels, uint64_t seed) {
  Rng rng(seed);
  Mat f(t, mels);
  for (size_t i = 0; i < f.size(); ++i) f.data()[i] = rng.normal() - 9.0;
  return f;
}

}  // namespace

TEST_CASE("shape law: T' depends only on T via the conv arithmetic") {
  ModelConfig cfg = tiny_config();
  CHECK(cfg.subsampled_len(98) == 24);
  CHECK(cfg.subsampled_len(4) == 1);
  CHECK(cfg.subsampled_len(100) == 25);
  CHECK(cfg.subsampled_len(101) == 25);
  CHECK(cfg.subsampled_freq() == 20);

  Model model(cfg, 1);
  for (int t : {4, 17, 98}) {
    Graph g;
    EncoderTrace trace;
    const int out =
        model.encoder_forward(g, g.constant(random_feats(t, 80, t)), &trace);
    CHECK(g.value(out).rows() == cfg.subsampled_len(t));
    CHECK(g.value(out).cols() == cfg.attn_dim);
    CHECK(trace.t_prime == cfg.subsampled_len(t));
    CHECK(static_cast<int>(trace.layers.size()) == cfg.num_encoder_layers);
  }

  Graph g;
  CHECK_THROWS_WITH_AS(
      model.encoder_forward(g, g.constant(random_feats(3, 80, 0))),
      doctest::Contains("too short"), std::invalid_argument);
}

TEST_CASE("hook transparency: zero-init adapters change nothing anywhere") {
  ModelConfig cfg = tiny_config();
  Model baseline(cfg, 7);
  Model adapted(cfg, 7);  // same seed -> identical backbone
  AdapterSpec spec;
  spec.positions = {1, 2};
  spec.emb_dim = 8;
  spec.in_out_dim = cfg.attn_dim;
  adapted.insert_adapters(spec, 99);

  const Mat feats = random_feats(40, 80, 3);
  Graph g1, g2;
  EncoderTrace t1, t2;
  const int o1 = baseline.encoder_forward(g1, g1.constant(feats), &t1);
  const int o2 = adapted.encoder_forward(g2, g2.constant(feats), &t2);
  CHECK(bit_equal(g1.value(o1), g2.value(o2)));
  REQUIRE(t1.layers.size() == t2.layers.size());
  for (size_t l = 0; l < t1.layers.size(); ++l)
    CHECK(bit_equal(t1.layers[l], t2.layers[l]));

  const std::vector<int> targets = {4, 5, 6};
  CHECK(baseline.compute_asr_loss(feats, targets) ==
        adapted.compute_asr_loss(feats, targets));
  CHECK(baseline.decode_greedy(feats) == adapted.decode_greedy(feats));
}

TEST_CASE("decode_greedy: deterministic, bounded, batch independent") {
  ModelConfig cfg = tiny_config();
  Model model(cfg, 21);
  const Mat feats = random_feats(37, 80, 5);
  const auto a = model.decode_greedy(feats);
  const auto b = model.decode_greedy(feats);
  CHECK(a == b);
  CHECK(static_cast<int>(a.size()) <= 2 * cfg.subsampled_len(37));

  // Per-utterance loss is unaffected by batch companions: computing two
  // utterances on one tape gives the same values as separately.
  const Mat feats2 = random_feats(25, 80, 6);
  const std::vector<int> y1 = {3, 4}, y2 = {5, 6, 7};
  const double solo1 = model.compute_asr_loss(feats, y1);
  const double solo2 = model.compute_asr_loss(feats2, y2);
  Graph g;
  const int l1 = model.asr_loss_node(g, g.constant(feats), y1);
  const int l2 = model.asr_loss_node(g, g.constant(feats2), y2);
  CHECK(g.value(l1)(0, 0) == solo1);
  CHECK(g.value(l2)(0, 0) == solo2);
}

TEST_CASE("duplicated utterance in a batch reproduces the single trace") {
  ModelConfig cfg = tiny_config();
  Model model(cfg, 22);
  const Mat feats = random_feats(29, 80, 8);
  Graph g;
  EncoderTrace ta, tb;
  model.encoder_forward(g, g.constant(feats), &ta);
  model.encoder_forward(g, g.constant(feats), &tb);
  REQUIRE(ta.layers.size() == tb.layers.size());
  for (size_t l = 0; l < ta.layers.size(); ++l)
    CHECK(bit_equal(ta.layers[l], tb.layers[l]));
}

TEST_CASE("asr loss: uniform logits give ln V; blank targets are rejected") {
  ModelConfig cfg = tiny_config();
  cfg.label_smoothing = 0.0;
  Model model(cfg, 2);
  // Zeroing the output projection makes every logit identical.
  model.params().at("dec.out.w").value.set_zero();
  model.params().at("dec.out.b").value.set_zero();
  const Mat feats = random_feats(20, 80, 9);
  const double loss = model.compute_asr_loss(feats, {3, 4, 5});
  CHECK(loss ==
        doctest::Approx(std::log(static_cast<double>(cfg.vocab_size)))
            .epsilon(1e-12));

  CHECK_THROWS_WITH_AS(
      model.compute_asr_loss(feats, {3, Tokenizer::kBlankId}),
      doctest::Contains("<blank>"), std::invalid_argument);
  CHECK_THROWS_AS(model.compute_asr_loss(feats, {}), std::invalid_argument);
  CHECK(model.compute_asr_loss(feats, {3, 4}) > 0.0);
}

TEST_CASE("finite differences: sampled backbone and adapter gradients") {
  ModelConfig cfg = tiny_config();
  cfg.num_encoder_layers = 1;
  cfg.num_decoder_layers = 1;
  Model model(cfg, 31);
  AdapterSpec spec;
  spec.positions = {1};
  spec.emb_dim = 8;
  spec.in_out_dim = cfg.attn_dim;
  model.insert_adapters(spec, 5);
  // Make the zero-init up-projection generic so its gradient is informative.
  Rng prng(77);
  tape::normal_init(&model.adapters()->params().at("adapter.l1.w_up").value,
                    0.05, &prng);

  const Mat feats = random_feats(16, 80, 11);
  const std::vector<int> targets = {4, 7, 9};

  auto loss_value = [&]() { return model.compute_asr_loss(feats, targets); };

  auto all = model.all_params();
  for (auto& [name, p] : all) p->grad.set_zero();
  {
    Graph g;
    const int loss = model.asr_loss_node(g, g.constant(feats), targets);
    g.backward(loss);
  }

  // A deterministic spread of parameters across components.
  const char* names[] = {"adapter.l1.w_down", "adapter.l1.w_up",
                         "adapter.l1.b_down", "enc.l1.attn.wq",
                         "enc.l1.conv.dw.w",  "enc.l1.ffn1.w1",
                         "enc.sub.conv1.w",   "enc.l1.attn.u",
                         "dec.l1.self.wv",    "dec.embed.w",
                         "dec.out.w",         "enc.l1.attn.wpos"};
  Rng pick(123);
  int checked = 0;
  for (const char* nm : names) {
    tape::Param* p = nullptr;
    for (auto& [name, q] : all)
      if (name == nm) p = q;
    REQUIRE(p != nullptr);
    for (int trial = 0; trial < 12 && checked < 40; ++trial) {
      const size_t i = pick.uniform_int(p->value.size());
      const double ana = p->grad.data()[i];
      if (std::fabs(ana) < 1e-7) continue;  // avoid degenerate comparisons
      const double w0 = p->value.data()[i];
      const double h = 1e-5 * std::max(1.0, std::fabs(w0));
      p->value.data()[i] = w0 + h;
      const double fp = loss_value();
      p->value.data()[i] = w0 - h;
      const double fm = loss_value();
      p->value.data()[i] = w0;
      const double num = (fp - fm) / (2.0 * h);
      const double rel =
          std::fabs(ana - num) / std::max(std::fabs(ana), std::fabs(num));
      INFO("param ", nm, " index ", i, " analytic ", ana, " numeric ", num);
      CHECK(rel < 1e-4);
      ++checked;
      break;  // one element per named parameter is enough here
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("adapter_forward: identity at zero-up init and dense-layer oracle") {
  Rng rng(41);
  const int t = 7, d = 12, m = 5;
  Mat e(t, d);
  for (size_t i = 0; i < e.size(); ++i) e.data()[i] = rng.normal();

  tape::Param w_down, b_down, w_up, b_up;
  w_down.value = Mat(d, m);
  tape::normal_init(&w_down.value, 0.5, &rng);
  b_down.value = Mat(1, m);
  tape::normal_init(&b_down.value, 0.5, &rng);
  w_up.value = Mat(m, d);
  b_up.value = Mat(1, d);

  // Zero up-projection: e' == e exactly.
  {
    Graph g;
    const int out =
        adapter_forward(g, g.constant(e), g.param(w_down), g.param(b_down),
                        g.param(w_up), g.param(b_up), AdapterActivation::relu);
    CHECK(bit_equal(g.value(out), e));
  }

  // Generic parameters: match an independently coded per-frame dense oracle.
  tape::normal_init(&w_up.value, 0.5, &rng);
  tape::normal_init(&b_up.value, 0.5, &rng);
  Graph g;
  const int out =
      adapter_forward(g, g.constant(e), g.param(w_down), g.param(b_down),
                      g.param(w_up), g.param(b_up), AdapterActivation::relu);

  Mat expect(t, d);
  for (int r = 0; r < t; ++r) {
    std::vector<double> hidden(m, 0.0);
    for (int j = 0; j < m; ++j) {
      double acc = b_down.value(0, j);
      for (int c = 0; c < d; ++c) acc += e(r, c) * w_down.value(c, j);
      hidden[j] = acc > 0.0 ? acc : 0.0;
    }
    for (int c = 0; c < d; ++c) {
      double acc = b_up.value(0, c);
      for (int j = 0; j < m; ++j) acc += hidden[j] * w_up.value(j, c);
      expect(r, c) = e(r, c) + acc;
    }
  }
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < d; ++c)
      CHECK(g.value(out)(r, c) ==
            doctest::Approx(expect(r, c)).epsilon(1e-6));

  // Residual decomposition: e' - e equals the branch output exactly.
  Mat diff(t, d);
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < d; ++c) diff(r, c) = g.value(out)(r, c) - e(r, c);
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < d; ++c)
      CHECK(diff(r, c) ==
            doctest::Approx(expect(r, c) - e(r, c)).epsilon(1e-9));

  // Zero input, zero biases, act(0) = 0: output stays zero.
  b_down.value.set_zero();
  b_up.value.set_zero();
  Graph gz;
  const int z =
      adapter_forward(gz, gz.constant(Mat(t, d)), gz.param(w_down),
                      gz.param(b_down), gz.param(w_up), gz.param(b_up),
                      AdapterActivation::relu);
  for (size_t i = 0; i < gz.value(z).size(); ++i)
    CHECK(gz.value(z).data()[i] == 0.0);
}

TEST_CASE("insert_adapters: position validation") {
  ModelConfig cfg = tiny_config();
  cfg.num_encoder_layers = 6;
  {
    Model m(cfg, 1);
    AdapterSpec spec;
    spec.positions = {7};
    spec.emb_dim = 4;
    spec.in_out_dim = cfg.attn_dim;
    CHECK_THROWS_WITH_AS(m.insert_adapters(spec, 1),
                         doctest::Contains("position 7"),
                         std::invalid_argument);
  }
  {
    Model m(cfg, 1);
    AdapterSpec spec;
    spec.positions = {2, 2};
    spec.emb_dim = 4;
    spec.in_out_dim = cfg.attn_dim;
    CHECK_THROWS_WITH_AS(m.insert_adapters(spec, 1),
                         doctest::Contains("duplicate"),
                         std::invalid_argument);
  }
  {
    Model m(cfg, 1);
    AdapterSpec spec;
    spec.positions = {1};
    spec.emb_dim = cfg.attn_dim;  // m must be < d
    spec.in_out_dim = cfg.attn_dim;
    CHECK_THROWS_AS(m.insert_adapters(spec, 1), std::invalid_argument);
  }
  {
    Model m(cfg, 1);
    AdapterSpec spec;
    spec.positions = {1};
    spec.emb_dim = 4;
    spec.in_out_dim = cfg.attn_dim;
    m.insert_adapters(spec, 1);
    CHECK(m.adapters() != nullptr);
    CHECK(m.adapters()->params().count_total() ==
          static_cast<size_t>(spec.params_per_adapter()));
  }
}

TEST_CASE("parameter accounting: count law and the 512/64 reference points") {
  // One adapter at (d=512, m=64): 512*64 + 64 + 64*512 + 512 = 66112.
  ModelConfig cfg;
  cfg.num_encoder_layers = 6;
  cfg.num_decoder_layers = 1;
  cfg.attn_dim = 512;
  cfg.attn_heads = 4;
  cfg.ff_units = 8;
  cfg.conv_channels = 2;
  cfg.vocab_size = 8;
  Model model(cfg, 3);
  model.freeze_backbone();
  CHECK(model.count_trainable_params() == 0);

  AdapterSpec spec;
  spec.positions = {1};
  spec.emb_dim = 64;
  spec.in_out_dim = 512;
  model.insert_adapters(spec, 4);
  CHECK(model.count_trainable_params() == 66112);

  Model model6(cfg, 3);
  model6.freeze_backbone();
  AdapterSpec spec6;
  spec6.positions = {1, 2, 3, 4, 5, 6};
  spec6.emb_dim = 64;
  spec6.in_out_dim = 512;
  model6.insert_adapters(spec6, 4);
  CHECK(model6.count_trainable_params() == 396672);

  // Count law |positions|*(2dm+m+d) across the desk-scale sweep (the
  // full-size sweep values scaled by 128/512).
  for (int m : {4, 8, 16, 24, 32}) {
    ModelConfig small = tiny_config();
    small.attn_dim = 128;
    small.num_encoder_layers = 3;
    Model sm(small, 9);
    sm.freeze_backbone();
    AdapterSpec s;
    s.positions = {1, 3};
    s.emb_dim = m;
    s.in_out_dim = 128;
    sm.insert_adapters(s, 9);
    CHECK(sm.count_trainable_params() == 2L * (2L * 128 * m + m + 128));
  }
}

TEST_CASE("freeze_backbone: trainable set is exactly the adapter set") {
  ModelConfig cfg = tiny_config();
  Model model(cfg, 5);
  AdapterSpec spec;
  spec.positions = {1};
  spec.emb_dim = 8;
  spec.in_out_dim = cfg.attn_dim;
  model.insert_adapters(spec, 6);
  model.freeze_backbone();

  for (auto& [name, p] : model.trainable_params())
    CHECK(name.rfind("adapter.", 0) == 0);
  CHECK(model.count_trainable_params() ==
        static_cast<long>(model.adapters()->params().count_total()));
}
