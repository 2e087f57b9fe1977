// corpus/wav.cc

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

#include "corpus/wav.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "core/util.h"

namespace adaptasr::corpus {

namespace {

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string* s, uint32_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>((v >> 8) & 0xff));
  s->push_back(static_cast<char>((v >> 16) & 0xff));
  s->push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string* s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(str_cat("load_wav: cannot open ", path));
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  require(bytes.size() >= 12 && std::memcmp(p, "RIFF", 4) == 0 &&
              std::memcmp(p + 8, "WAVE", 4) == 0,
          str_cat("load_wav: ", path, " is not a RIFF/WAVE file"));

  size_t off = 12;
  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char* data = nullptr;
  uint32_t data_len = 0;
  while (off + 8 <= bytes.size()) {
    const char* tag = bytes.data() + off;
    const uint32_t len = read_u32(p + off + 4);
    off += 8;
    if (off + len > bytes.size())
      throw std::runtime_error(str_cat("load_wav: truncated chunk in ", path));
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      require(len >= 16, "load_wav: short fmt chunk");
      format = read_u16(p + off);
      channels = read_u16(p + off + 2);
      rate = read_u32(p + off + 4);
      bits = read_u16(p + off + 14);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = p + off;
      data_len = len;
    }
    off += len + (len & 1);  // chunks are word-aligned
  }
  require(have_fmt && data != nullptr,
          str_cat("load_wav: missing fmt or data chunk in ", path));
  require(format == 1, str_cat("load_wav: ", path,
                               ": only PCM (format 1) is supported, got format ",
                               format));
  require(channels == 1, str_cat("load_wav: ", path, ": expected mono, got ",
                                 channels, " channels (no downmixing)"));
  require(rate == static_cast<uint32_t>(kSampleRate),
          str_cat("load_wav: ", path, ": expected ", kSampleRate, " Hz, got ",
                  rate, " Hz (no resampling)"));
  require(bits == 16, str_cat("load_wav: ", path,
                              ": expected 16-bit samples, got ", bits));

  const size_t n = data_len / 2;
  Waveform wave(n);
  for (size_t i = 0; i < n; ++i) {
    const int16_t s =
        static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    wave[i] = static_cast<double>(s) / 32768.0;
  }
  return wave;
}

void write_wav(const std::string& path, const Waveform& wave) {
  std::string out;
  const uint32_t data_len = static_cast<uint32_t>(wave.size() * 2);
  out.reserve(44 + data_len);
  out.append("RIFF");
  put_u32(&out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(&out, 16);
  put_u16(&out, 1);  // PCM
  put_u16(&out, 1);  // mono
  put_u32(&out, kSampleRate);
  put_u32(&out, kSampleRate * 2);  // byte rate
  put_u16(&out, 2);                // block align
  put_u16(&out, 16);               // bits
  out.append("data");
  put_u32(&out, data_len);
  for (double x : wave) {
    long v = std::lround(x * 32768.0);
    if (v > 32767) v = 32767;
    if (v < -32768) v = -32768;
    put_u16(&out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(str_cat("write_wav: cannot open ", path));
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  require(f.good(), str_cat("write_wav: short write to ", path));
}

}  // namespace adaptasr::corpus
