// tests/support/toytask.cc

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

#include "support/toytask.h"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "core/rng.h"
#include "core/util.h"
#include "corpus/mixing.h"
#include "corpus/wav.h"

namespace adaptasr::testsupport {

namespace fs = std::filesystem;
using corpus::Waveform;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRate = corpus::kSampleRate;

const char* kWords[] = {"ba", "de", "ki", "so", "bu", "da", "ko", "si"};

// Each character is a two-harmonic tone at a character-specific frequency.
double char_freq(char c) {
  static const std::string charset = "abdeikosu";
  const auto idx = charset.find(c);
  return 420.0 + 260.0 * static_cast<double>(idx);
}

void append_char_tone(Waveform* w, char c, Rng* rng) {
  const int len = kRate * 70 / 1000;  // 70 ms
  const double f = char_freq(c);
  const double phase = rng->uniform(0.0, 2.0 * kPi);
  for (int i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / kRate;
    double fade = 1.0;
    const int ramp = kRate * 5 / 1000;
    if (i < ramp) fade = static_cast<double>(i) / ramp;
    if (len - 1 - i < ramp) fade = static_cast<double>(len - 1 - i) / ramp;
    const double s = std::sin(2.0 * kPi * f * t + phase) +
                     0.4 * std::sin(2.0 * kPi * 2.0 * f * t + phase);
    w->push_back(0.25 * fade * s);
  }
}

void append_silence(Waveform* w, int ms) {
  w->insert(w->end(), kRate * ms / 1000, 0.0);
}

}  // namespace

std::pair<Waveform, std::string> toy_utterance(uint64_t stream_seed, int i) {
  Rng rng(derive_seed(stream_seed, {0x757474ULL, (uint64_t)i}));
  std::string text;
  Waveform wave;
  append_silence(&wave, 20);
  const int num_words = 3;
  for (int wi = 0; wi < num_words; ++wi) {
    const std::string word = kWords[rng.uniform_int(8)];
    if (wi) {
      text += " ";
      append_silence(&wave, 50);
    }
    for (size_t c = 0; c < word.size(); ++c) {
      if (c) append_silence(&wave, 15);
      append_char_tone(&wave, word[c], &rng);
    }
    text += word;
  }
  append_silence(&wave, 20);
  return {std::move(wave), std::move(text)};
}

Waveform toy_noise(const std::string& condition, size_t n, uint64_t seed) {
  Rng rng(derive_seed(seed, {0x6e6f69ULL}));
  Waveform w(n);
  if (condition == "white") {
    for (auto& x : w) x = 0.3 * rng.normal();
  } else if (condition == "warble") {
    // FM tone wandering across the tone band.
    const double f0 = 1200.0, dev = 900.0, rate = 7.0;
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    double acc = phase;
    for (size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / kRate;
      const double f = f0 + dev * std::sin(2.0 * kPi * rate * t);
      acc += 2.0 * kPi * f / kRate;
      w[i] = 0.5 * std::sin(acc);
    }
  } else if (condition == "siren") {
    // Triangular sweep over the whole band.
    const double lo = 450.0, hi = 2900.0, sweep_hz = 1.6;
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    double acc = phase;
    for (size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / kRate;
      const double saw = std::fabs(2.0 * (t * sweep_hz - std::floor(t * sweep_hz + 0.5)));
      const double f = lo + (hi - lo) * saw;
      acc += 2.0 * kPi * f / kRate;
      w[i] = 0.5 * std::sin(acc);
    }
  } else if (condition == "impulsive") {
    // Gated noise bursts.
    const int period = kRate / 10, on = period * 3 / 10;
    const size_t offset = rng.uniform_int(period);
    for (size_t i = 0; i < n; ++i) {
      const bool gate = static_cast<int>((i + offset) % period) < on;
      w[i] = gate ? 0.8 * rng.normal() : 0.02 * rng.normal();
    }
  } else if (condition == "hum") {
    // Dense harmonic stack reaching into the tone band.
    double phases[10];
    for (auto& p : phases) p = rng.uniform(0.0, 2.0 * kPi);
    for (size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / kRate;
      double s = 0.0;
      for (int k = 1; k <= 10; ++k)
        s += std::sin(2.0 * kPi * 170.0 * k * t + phases[k - 1]) / std::sqrt(k);
      w[i] = 0.25 * s + 0.05 * rng.normal();
    }
  } else {
    throw std::invalid_argument(str_cat("toy_noise: unknown condition '",
                                        condition, "'"));
  }
  return w;
}

asr::ModelConfig toy_model_config(int vocab_size) {
  asr::ModelConfig cfg;
  cfg.num_encoder_layers = 3;
  cfg.num_decoder_layers = 2;
  cfg.attn_dim = 64;
  cfg.attn_heads = 4;
  cfg.ff_units = 192;
  cfg.conv_channels = 8;
  cfg.vocab_size = vocab_size;
  return cfg;
}

ToyTask make_toy_task(const ToyTaskOptions& opt) {
  require(!opt.root.empty(), "toy task: root directory required");
  fs::create_directories(opt.root);
  const fs::path root(opt.root);

  ToyTask task;
  task.b_conditions = {"warble", "siren", "impulsive", "hum"};
  task.pretrain = corpus::Manifest({"clean", "white"});
  task.adapt = corpus::Manifest(task.b_conditions);

  std::vector<std::string> all_texts;
  int utt_index = 0;

  auto add_pretrain = [&](corpus::Split split, int count) {
    for (int i = 0; i < count; ++i, ++utt_index) {
      auto [wave, text] = toy_utterance(opt.seed, utt_index);
      all_texts.push_back(text);
      corpus::UtteranceRecord rec;
      rec.split = split;
      rec.transcript = text;
      const bool mixed = i % 2 == 1;
      rec.id = str_cat("pre_", corpus::split_name(split), "_", i);
      rec.audio_path = (root / (rec.id + ".wav")).string();
      if (mixed) {
        Rng rng(derive_seed(opt.seed, {0x736e72ULL, (uint64_t)utt_index}));
        const double snr = rng.uniform(opt.pretrain_snr_lo, opt.pretrain_snr_hi);
        const auto noise =
            toy_noise("white", wave.size(),
                      derive_seed(opt.seed, {0x6e7765ULL, (uint64_t)utt_index}));
        const auto mix = corpus::mix_at_snr(wave, noise, snr,
                                            derive_seed(opt.seed, {9, (uint64_t)utt_index}));
        rec.condition = "white";
        rec.is_real = false;
        rec.snr_db = snr;
        corpus::write_wav(rec.audio_path, mix.noisy);
      } else {
        rec.condition = "clean";
        rec.is_real = true;
        corpus::write_wav(rec.audio_path, wave);
      }
      task.pretrain.append(std::move(rec));
    }
  };

  add_pretrain(corpus::Split::train, opt.pretrain_train);
  add_pretrain(corpus::Split::dev, opt.pretrain_dev);

  auto add_adapt = [&](corpus::Split split, int per_cond) {
    for (const auto& cond : task.b_conditions) {
      for (int i = 0; i < per_cond; ++i, ++utt_index) {
        auto [wave, text] = toy_utterance(opt.seed, utt_index);
        all_texts.push_back(text);
        corpus::UtteranceRecord rec;
        rec.split = split;
        rec.transcript = text;
        rec.condition = cond;
        rec.id = str_cat("adp_", corpus::split_name(split), "_", cond, "_", i);
        rec.audio_path = (root / (rec.id + ".wav")).string();

        Rng rng(derive_seed(opt.seed, {0x62736e72ULL, (uint64_t)utt_index}));
        const double snr = rng.uniform(opt.adapt_snr_lo, opt.adapt_snr_hi);
        const auto noise =
            toy_noise(cond, wave.size(),
                      derive_seed(opt.seed, {0x626eULL, (uint64_t)utt_index}));
        const auto mix = corpus::mix_at_snr(
            wave, noise, snr, derive_seed(opt.seed, {10, (uint64_t)utt_index}));
        corpus::write_wav(rec.audio_path, mix.noisy);

        // A slice of the train split plays the role of real field recordings:
        // same audio, but no clean reference and no snr metadata.
        const bool real = split == corpus::Split::train &&
                          rng.uniform() < opt.fraction_real;
        rec.is_real = real;
        if (!real) {
          rec.snr_db = snr;
          const std::string clean_path =
              (root / (rec.id + "_clean.wav")).string();
          corpus::write_wav(clean_path, wave);
          rec.clean_path = clean_path;
        }
        task.adapt.append(std::move(rec));
      }
    }
  };

  add_adapt(corpus::Split::train, opt.adapt_train_per_cond);
  add_adapt(corpus::Split::dev, opt.adapt_dev_per_cond);
  add_adapt(corpus::Split::eval, opt.adapt_eval_per_cond);

  task.pretrain.save((root / "pretrain_manifest.jsonl").string());
  task.adapt.save((root / "adapt_manifest.jsonl").string());
  task.tokenizer = features::Tokenizer::build(all_texts);
  return task;
}

}  // namespace adaptasr::testsupport
