// tests/test_corpus.cc

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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/rng.h"
#include "corpus/manifest.h"
#include "corpus/mixing.h"
#include "corpus/regime.h"
#include "corpus/wav.h"
#include "doctest.h"

using namespace adaptasr;
using namespace adaptasr::corpus;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() /
               ("adaptasr_corpus_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

// Second, independently coded WAV decoder for cross-checking load_wav. It
// assumes the canonical 44-byte header our writer produces.
Waveform naive_wav_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() >= 44);
  Waveform w;
  for (size_t i = 44; i + 1 < bytes.size(); i += 2) {
    const int16_t s = static_cast<int16_t>(
        static_cast<unsigned char>(bytes[i]) |
        (static_cast<unsigned char>(bytes[i + 1]) << 8));
    w.push_back(s / 32768.0);
  }
  return w;
}

}  // namespace

TEST_CASE("load_wav: one second file has 16000 samples") {
  const auto dir = temp_dir();
  Waveform wave(16000);
  Rng rng(5);
  for (auto& x : wave) x = 0.25 * rng.normal();
  const std::string p = (dir / "a.wav").string();
  write_wav(p, wave);
  CHECK(load_wav(p).size() == 16000);
}

TEST_CASE("load_wav: all-zero file decodes to silence") {
  const auto dir = temp_dir();
  const std::string p = (dir / "z.wav").string();
  write_wav(p, Waveform(800, 0.0));
  const auto w = load_wav(p);
  double peak = 0.0;
  for (double x : w) peak = std::max(peak, std::fabs(x));
  CHECK(w.size() == 800);
  CHECK(peak == 0.0);
}

TEST_CASE("load_wav: full-scale square wave matches an independent decoder") {
  const auto dir = temp_dir();
  Waveform square(320);
  for (size_t i = 0; i < square.size(); ++i)
    square[i] = (i / 16) % 2 == 0 ? 1.0 : -1.0;
  const std::string p = (dir / "sq.wav").string();
  write_wav(p, square);

  const auto ours = load_wav(p);
  const auto theirs = naive_wav_read(p);
  REQUIRE(ours.size() == theirs.size());
  for (size_t i = 0; i < ours.size(); ++i) CHECK(ours[i] == theirs[i]);
  // +1.0 clamps to 32767 levels, -1.0 is representable exactly.
  CHECK(ours[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(ours[16] == doctest::Approx(-1.0));
}

TEST_CASE("load_wav: rejections are explicit") {
  const auto dir = temp_dir();
  CHECK_THROWS_WITH_AS(load_wav((dir / "missing.wav").string()),
                       doctest::Contains("cannot open"), std::runtime_error);

  // Hand-build an 8 kHz header.
  std::string bad;
  bad.append("RIFF");
  const auto put32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) bad.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  const auto put16 = [&](uint16_t v) {
    bad.push_back(static_cast<char>(v & 0xff));
    bad.push_back(static_cast<char>(v >> 8));
  };
  put32(36);
  bad.append("WAVE");
  bad.append("fmt ");
  put32(16);
  put16(1);
  put16(1);
  put32(8000);
  put32(16000);
  put16(2);
  put16(16);
  bad.append("data");
  put32(0);
  const std::string p = (dir / "8k.wav").string();
  std::ofstream(p, std::ios::binary).write(bad.data(), bad.size());
  CHECK_THROWS_WITH_AS(load_wav(p), doctest::Contains("no resampling"),
                       std::invalid_argument);

  // Stereo.
  bad[22] = 2;
  const std::string p2 = (dir / "stereo.wav").string();
  std::ofstream(p2, std::ios::binary).write(bad.data(), bad.size());
  CHECK_THROWS_AS(load_wav(p2), std::invalid_argument);
}

TEST_CASE("mix_at_snr: gain closed forms at equal power") {
  Waveform clean(1000), noise(1000);
  for (size_t i = 0; i < clean.size(); ++i) {
    clean[i] = i % 2 == 0 ? 0.5 : -0.5;
    noise[i] = i % 2 == 0 ? -0.5 : 0.5;
  }
  const auto r0 = mix_at_snr(clean, noise, 0.0, 1);
  CHECK(r0.gain == doctest::Approx(1.0).epsilon(1e-12));
  const auto r20 = mix_at_snr(clean, noise, 20.0, 1);
  CHECK(r20.gain == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("mix_at_snr: round trip recovers the requested SNR") {
  Rng rng(99);
  Waveform clean(3200), noise(5000);
  for (auto& x : clean) x = 0.3 * rng.normal();
  for (auto& x : noise) x = 0.7 * rng.normal();
  const auto r = mix_at_snr(clean, noise, 7.5, 42);
  Waveform scaled(r.noise_segment);
  for (auto& x : scaled) x *= r.gain;
  CHECK(std::fabs(measure_snr(clean, scaled) - 7.5) < 1e-6);
}

TEST_CASE("mix_at_snr: 100 random round trips within 1e-6 dB") {
  Rng rng(123);
  for (int i = 0; i < 100; ++i) {
    const size_t nc = 500 + rng.uniform_int(2000);
    const size_t nn = 200 + rng.uniform_int(3000);
    Waveform clean(nc), noise(nn);
    for (auto& x : clean) x = 0.4 * rng.normal();
    for (auto& x : noise) x = 0.2 * rng.normal();
    const double snr = rng.uniform(-10.0, 40.0);
    const auto r = mix_at_snr(clean, noise, snr, rng.next_u64());
    Waveform scaled(r.noise_segment);
    for (auto& x : scaled) x *= r.gain;
    CHECK(std::fabs(measure_snr(clean, scaled) - snr) < 1e-6);
  }
}

TEST_CASE("mix_at_snr: deterministic under fixed seed and policy") {
  Rng rng(7);
  Waveform clean(2000), noise(600);
  for (auto& x : clean) x = rng.normal();
  for (auto& x : noise) x = rng.normal();
  const auto a = mix_at_snr(clean, noise, 5.0, 77);
  const auto b = mix_at_snr(clean, noise, 5.0, 77);
  REQUIRE(a.noisy.size() == b.noisy.size());
  for (size_t i = 0; i < a.noisy.size(); ++i) CHECK(a.noisy[i] == b.noisy[i]);
  const auto c = mix_at_snr(clean, noise, 5.0, 78);
  bool differs = false;
  for (size_t i = 0; i < a.noisy.size() && !differs; ++i)
    differs = a.noisy[i] != c.noisy[i];
  CHECK(differs);
}

TEST_CASE("mix_at_snr: short noise is tiled by whole copies") {
  Waveform clean(900);
  Waveform noise(300);
  Rng rng(3);
  for (auto& x : clean) x = rng.normal();
  for (auto& x : noise) x = rng.normal();
  const auto r =
      mix_at_snr(clean, noise, 0.0, 5, NoiseOffsetPolicy::fixed_zero);
  for (size_t i = 0; i < clean.size(); ++i)
    CHECK(r.noise_segment[i] == noise[i % noise.size()]);
}

TEST_CASE("mix_at_snr and measure_snr: zero power raises domain errors") {
  Waveform silence(100, 0.0), tone(100, 0.5);
  CHECK_THROWS_AS(mix_at_snr(silence, tone, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(mix_at_snr(tone, silence, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(measure_snr(silence, tone), std::domain_error);
  CHECK_THROWS_AS(measure_snr(tone, silence), std::domain_error);
}

namespace {

Manifest toy_manifest() {
  Manifest m({"bus", "caf", "ped", "str"});
  const char* conds[] = {"bus", "caf", "ped", "str"};
  for (int i = 0; i < 160; ++i) {
    UtteranceRecord r;
    r.id = (i < 100 ? "u0" : "u") + std::to_string(i);
    r.audio_path = "none.wav";
    r.transcript = "a b";
    r.condition = conds[i % 4];
    r.is_real = (i / 4) % 2 == 0;
    if (!r.is_real) r.snr_db = 10.0;
    r.split = Split::train;
    m.append(r);
  }
  return m;
}

}  // namespace

TEST_CASE("select_regime: ALL/ALL returns the full training manifest") {
  const auto m = toy_manifest();
  DataRegime reg;
  reg.seed = 1;
  const auto sel = select_regime(m, reg);
  CHECK(sel.records().size() == m.records().size());
}

TEST_CASE("select_regime: held-out condition filter and determinism") {
  const auto m = toy_manifest();
  DataRegime reg;
  reg.real_count = 10;
  reg.simu_count = 0;
  reg.held_out_condition = "bus";
  reg.seed = 9;
  const auto a = select_regime(m, reg);
  const auto b = select_regime(m, reg);
  REQUIRE(a.records().size() == 10);
  for (size_t i = 0; i < a.records().size(); ++i) {
    CHECK(a.records()[i].id == b.records()[i].id);
    CHECK(a.records()[i].condition == "bus");
    CHECK(a.records()[i].is_real);
  }
}

TEST_CASE("select_regime: output independent of manifest record order") {
  const auto m = toy_manifest();
  Manifest shuffled(m.conditions());
  auto recs = m.records();
  Rng rng(4);
  rng.shuffle(&recs);
  for (auto& r : recs) shuffled.append(r);

  DataRegime reg;
  reg.real_count = 12;
  reg.simu_count = 8;
  reg.seed = 21;
  const auto a = select_regime(m, reg);
  const auto b = select_regime(shuffled, reg);
  REQUIRE(a.records().size() == b.records().size());
  for (size_t i = 0; i < a.records().size(); ++i)
    CHECK(a.records()[i].id == b.records()[i].id);
}

TEST_CASE("select_regime: multi-condition quota takes an even split") {
  const auto m = toy_manifest();
  DataRegime reg;
  reg.real_count = 40;
  reg.simu_count = 0;
  reg.multi_condition_quota = 10;
  reg.seed = 2;
  const auto sel = select_regime(m, reg);
  REQUIRE(sel.records().size() == 40);
  int per_cond[4] = {0, 0, 0, 0};
  const auto& conds = m.conditions();
  for (const auto& r : sel.records()) {
    for (int c = 0; c < 4; ++c)
      if (r.condition == conds[c]) ++per_cond[c];
    CHECK(r.is_real);
  }
  for (int c = 0; c < 4; ++c) CHECK(per_cond[c] == 10);
}

TEST_CASE("select_regime: shortfall lists requested vs available") {
  const auto m = toy_manifest();
  DataRegime reg;
  reg.real_count = 1000;
  reg.simu_count = 0;
  reg.seed = 1;
  CHECK_THROWS_WITH_AS(select_regime(m, reg),
                       doctest::Contains("requested 1000"),
                       std::invalid_argument);
}

TEST_CASE("manifest: save/load round trip and invariant checks") {
  const auto dir = temp_dir();
  const auto m = toy_manifest();
  const std::string p = (dir / "m.jsonl").string();
  m.save(p);
  const auto loaded = Manifest::load(p);
  REQUIRE(loaded.records().size() == m.records().size());
  CHECK(loaded.conditions() == m.conditions());
  for (size_t i = 0; i < m.records().size(); ++i) {
    CHECK(loaded.records()[i].id == m.records()[i].id);
    CHECK(loaded.records()[i].is_real == m.records()[i].is_real);
    CHECK(loaded.records()[i].snr_db.has_value() ==
          m.records()[i].snr_db.has_value());
  }

  Manifest bad({"bus"});
  UtteranceRecord r;
  r.id = "x";
  r.audio_path = "a.wav";
  r.condition = "bus";
  r.is_real = true;
  r.snr_db = 3.0;  // real records must not carry snr
  CHECK_THROWS_AS(bad.append(r), std::invalid_argument);
  r.snr_db.reset();
  bad.append(r);
  CHECK_THROWS_WITH_AS(bad.append(r), doctest::Contains("duplicate"),
                       std::invalid_argument);
  UtteranceRecord off = r;
  off.id = "y";
  off.condition = "unheard";
  CHECK_THROWS_AS(bad.append(off), std::invalid_argument);
}
