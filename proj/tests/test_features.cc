// tests/test_features.cc

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
#include <filesystem>
#include <numbers>

#include "core/rng.h"
#include "doctest.h"
#include "features/features.h"
#include "features/specaug.h"
#include "features/tokenizer.h"

using namespace adaptasr;
using namespace adaptasr::features;
using corpus::Waveform;

namespace {

Waveform sine(double freq_hz, int n, double amp = 0.5) {
  Waveform w(n);
  for (int i = 0; i < n; ++i)
    w[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * i / 16000.0);
  return w;
}

Waveform noise_wave(int n, uint64_t seed, double amp = 0.3) {
  Rng rng(seed);
  Waveform w(n);
  for (auto& x : w) x = amp * rng.normal();
  return w;
}

}  // namespace

TEST_CASE("stft_magnitude: zero waveform gives all-zero magnitude") {
  Analyzer an;
  const auto m = an.stft_magnitude(Waveform(4000, 0.0));
  CHECK(m.kind == FeatureKind::magnitude);
  for (size_t i = 0; i < m.data.size(); ++i) CHECK(m.data.data()[i] == 0.0);
}

TEST_CASE("stft_magnitude: bin-center sinusoid peaks at its bin") {
  Analyzer an;
  // Bin 32 of a 512-point FFT at 16 kHz is exactly 1000 Hz.
  const int target_bin = 32;
  const double f = target_bin * 16000.0 / 512.0;
  const auto m = an.stft_magnitude(sine(f, 16000));
  for (int t = 0; t < m.data.rows(); ++t) {
    int argmax = 0;
    for (int b = 1; b < m.data.cols(); ++b)
      if (m.data(t, b) > m.data(t, argmax)) argmax = b;
    CHECK(argmax == target_bin);
  }
}

TEST_CASE("stft framing: one second at 25ms/10ms gives 98 frames") {
  Analyzer an;
  CHECK(an.num_frames(16000) == 98);
  const auto m = an.stft_magnitude(noise_wave(16000, 1));
  CHECK(m.data.rows() == 98);
  CHECK(m.data.cols() == 257);
  CHECK_THROWS_AS(an.stft_magnitude(Waveform(399, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("logmel: zero waveform hits the log floor everywhere") {
  Analyzer an;
  const auto m = an.logmel(Waveform(1600, 0.0));
  const double floor_val = std::log(1e-10);
  CHECK(m.kind == FeatureKind::logmel);
  CHECK(m.data.cols() == 80);
  for (size_t i = 0; i < m.data.size(); ++i)
    CHECK(m.data.data()[i] == doctest::Approx(floor_val));
}

TEST_CASE("logmel: doubling the waveform shifts every entry by log 4") {
  Analyzer an;
  const auto w = noise_wave(8000, 2, 0.2);
  Waveform w2(w);
  for (auto& x : w2) x *= 2.0;
  const auto a = an.logmel(w);
  const auto b = an.logmel(w2);
  const double lg4 = std::log(4.0);
  for (size_t i = 0; i < a.data.size(); ++i) {
    CHECK(b.data.data()[i] - a.data.data()[i] ==
          doctest::Approx(lg4).epsilon(1e-12));
  }
}

TEST_CASE("logmel: one second input is 98 x 80") {
  Analyzer an;
  const auto m = an.logmel(noise_wave(16000, 3));
  CHECK(m.data.rows() == 98);
  CHECK(m.data.cols() == 80);
}

TEST_CASE("logmel: shifting by one hop shifts frames by one, bit-identical") {
  Analyzer an;
  const auto w = noise_wave(4000, 4);
  Waveform shifted(160, 0.0);
  shifted.insert(shifted.end(), w.begin(), w.end());
  const auto a = an.logmel(w);
  const auto b = an.logmel(shifted);
  REQUIRE(b.data.rows() == a.data.rows() + 1);
  for (int t = 0; t < a.data.rows(); ++t)
    for (int c = 0; c < 80; ++c) CHECK(b.data(t + 1, c) == a.data(t, c));
}

TEST_CASE("graph feature path matches the eager path") {
  Analyzer an;
  const auto w = noise_wave(3200, 5);
  const auto eager = an.logmel(w);

  tape::Graph g;
  Mat wave_mat(1, static_cast<int>(w.size()));
  for (size_t i = 0; i < w.size(); ++i) wave_mat.data()[i] = w[i];
  const int power = an.power_node(g, g.constant(wave_mat));
  const int lm = an.logmel_from_power(g, power);
  CHECK(bit_equal(g.value(lm), eager.data));

  // Magnitude squared recovers power up to the epsilon inside the sqrt.
  const int mag = an.magnitude_from_power(g, power);
  const auto eager_mag = an.stft_magnitude(w);
  CHECK(max_abs_diff(g.value(mag), eager_mag.data) < 1e-6);
}

TEST_CASE("spec_augment: zero policy is the identity") {
  Analyzer an;
  const auto f = an.logmel(noise_wave(4000, 6));
  SpecAugPolicy p;
  const auto out = spec_augment(f, p);
  CHECK(bit_equal(out.data, f.data));
}

TEST_CASE("spec_augment: single full-width time mask stays contiguous") {
  Analyzer an;
  const auto f = an.logmel(noise_wave(4000, 7));
  SpecAugPolicy p;
  p.num_time_masks = 1;
  p.max_time_width = f.data.rows();
  p.seed = 11;
  const auto out = spec_augment(f, p);
  REQUIRE(out.data.same_shape(f.data));

  // Each row is either untouched or fully replaced by the global mean.
  double mean = 0.0;
  for (size_t i = 0; i < f.data.size(); ++i) mean += f.data.data()[i];
  mean /= static_cast<double>(f.data.size());

  int masked_runs = 0;
  bool in_run = false;
  for (int t = 0; t < out.data.rows(); ++t) {
    bool row_masked = true;
    bool row_untouched = true;
    for (int c = 0; c < out.data.cols(); ++c) {
      if (out.data(t, c) != mean) row_masked = false;
      if (out.data(t, c) != f.data(t, c)) row_untouched = false;
    }
    CHECK((row_masked || row_untouched));
    if (row_masked && !in_run) ++masked_runs;
    in_run = row_masked;
  }
  CHECK(masked_runs <= 1);
}

TEST_CASE("spec_augment: unmasked cells are bit-identical, shape preserved") {
  Analyzer an;
  const auto f = an.logmel(noise_wave(6000, 8));
  SpecAugPolicy p;
  p.num_freq_masks = 2;
  p.max_freq_width = 12;
  p.num_time_masks = 2;
  p.max_time_width = 9;
  p.seed = 23;
  const auto out = spec_augment(f, p);
  REQUIRE(out.data.same_shape(f.data));

  double mean = 0.0;
  for (size_t i = 0; i < f.data.size(); ++i) mean += f.data.data()[i];
  mean /= static_cast<double>(f.data.size());
  for (int t = 0; t < out.data.rows(); ++t)
    for (int c = 0; c < out.data.cols(); ++c)
      if (out.data(t, c) != f.data(t, c)) CHECK(out.data(t, c) == mean);

  // Determinism.
  const auto again = spec_augment(f, p);
  CHECK(bit_equal(again.data, out.data));
}

TEST_CASE("spec_augment: masked fraction matches the analytic expectation") {
  // One time mask of width U{0..wt} and one frequency mask of width
  // U{0..wf}: E[fraction] = E[wt]/T + E[wf]/F - E[wt]E[wf]/(T F).
  Analyzer an;
  const auto f = an.logmel(noise_wave(16000, 9));
  const int t = f.data.rows(), fdim = f.data.cols();
  SpecAugPolicy p;
  p.num_time_masks = 1;
  p.max_time_width = 20;
  p.num_freq_masks = 1;
  p.max_freq_width = 16;

  // Shift the features so the mean fill value never collides with data.
  FeatureMatrix probe = f;
  for (size_t i = 0; i < probe.data.size(); ++i) probe.data.data()[i] += 1e3;

  double masked = 0.0;
  const int draws = 1000;
  for (int d = 0; d < draws; ++d) {
    p.seed = 1000 + d;
    const auto out = spec_augment(probe, p);
    for (int r = 0; r < t; ++r)
      for (int c = 0; c < fdim; ++c)
        if (out.data(r, c) != probe.data(r, c)) masked += 1.0;
  }
  const double frac = masked / (static_cast<double>(draws) * t * fdim);
  const double et = p.max_time_width / 2.0, ef = p.max_freq_width / 2.0;
  const double expect =
      et / t + ef / fdim - (et * ef) / (static_cast<double>(t) * fdim);
  CHECK(std::fabs(frac - expect) < 0.02);
}

TEST_CASE("tokenizer: round trips, unk handling, reserved ids") {
  Tokenizer tok = Tokenizer::build({"abc d", "efg"});
  CHECK(tok.vocab_size() == 3 + 8);  // space + 7 letters

  CHECK(tok.tokenize("").empty());
  CHECK(tok.detokenize({}) == "");

  const auto ids = tok.tokenize("abc");
  CHECK(ids.size() == 3);
  for (int id : ids) CHECK(id >= Tokenizer::kNumReserved);
  CHECK(tok.detokenize(ids) == "abc");

  const auto with_unk = tok.tokenize("axz");
  CHECK(with_unk[1] == Tokenizer::kUnkId);
  CHECK(tok.detokenize(with_unk) == "a<unk><unk>");

  CHECK_THROWS_AS(tok.detokenize({99}), std::invalid_argument);
  CHECK_THROWS_AS(tok.detokenize({-1}), std::invalid_argument);
}

TEST_CASE("tokenizer: table file round trip, reserved symbols first") {
  namespace fs = std::filesystem;
  Tokenizer tok = Tokenizer::build({"hello world"});
  const auto p =
      (fs::temp_directory_path() / "adaptasr_tok_table.txt").string();
  tok.save(p);

  std::ifstream in(p);
  std::string l0, l1, l2;
  std::getline(in, l0);
  std::getline(in, l1);
  std::getline(in, l2);
  CHECK(l0 == "<blank>\t0");
  CHECK(l1 == "<unk>\t1");
  CHECK(l2 == "<sos/eos>\t2");

  const Tokenizer loaded = Tokenizer::load(p);
  CHECK(loaded.vocab_size() == tok.vocab_size());
  const std::string text = "hello world";
  CHECK(loaded.detokenize(loaded.tokenize(text)) == text);
}
