// tools/bench_kernels.cc

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

// Times the OpenMP kernels against their serial reference implementations
// and verifies bit-exact agreement on the benchmarked shapes.
//
//   bench_kernels [--threads N] [--repeat R]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "core/rng.h"
#include "kernels/kernels.h"
#include "kernels/reference.h"

using namespace adaptasr;

namespace {

double time_ms(const std::function<void()>& fn, int repeat) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeat; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeat;
}

std::vector<double> random_vec(size_t n, Rng* rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng->normal();
  return v;
}

void row(const char* name, double serial_ms, double parallel_ms, bool exact) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, exact ? "bit-exact" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark: serial reference vs OpenMP"};
  int threads = 0, repeat = 5;
  app.add_option("--threads", threads, "OpenMP thread count (0 = default)");
  app.add_option("--repeat", repeat, "Timed repetitions per kernel");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) kernels::set_threads(threads);

  std::printf("threads: %d\n", kernels::max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  Rng rng(1234);

  {
    const int m = 384, k = 384, n = 384;
    auto a = random_vec((size_t)m * k, &rng);
    auto b = random_vec((size_t)k * n, &rng);
    std::vector<double> c1((size_t)m * n), c2 = c1;
    const double ts = time_ms(
        [&] { kernels::reference::gemm_nn(m, k, n, a.data(), b.data(), c1.data(), 0.0); },
        repeat);
    const double tp = time_ms(
        [&] { kernels::gemm_nn(m, k, n, a.data(), b.data(), c2.data(), 0.0); },
        repeat);
    row("gemm_nn 384^3", ts, tp,
        std::memcmp(c1.data(), c2.data(), c1.size() * 8) == 0);
  }
  {
    const int m = 384, k = 384, n = 384;
    auto a = random_vec((size_t)m * k, &rng);
    auto b = random_vec((size_t)n * k, &rng);
    std::vector<double> c1((size_t)m * n), c2 = c1;
    const double ts = time_ms(
        [&] { kernels::reference::gemm_nt(m, k, n, a.data(), b.data(), c1.data(), 0.0); },
        repeat);
    const double tp = time_ms(
        [&] { kernels::gemm_nt(m, k, n, a.data(), b.data(), c2.data(), 0.0); },
        repeat);
    row("gemm_nt 384^3", ts, tp,
        std::memcmp(c1.data(), c2.data(), c1.size() * 8) == 0);
  }
  {
    const int m = 384, k = 384, n = 384;
    auto a = random_vec((size_t)k * m, &rng);
    auto b = random_vec((size_t)k * n, &rng);
    std::vector<double> c1((size_t)m * n), c2 = c1;
    const double ts = time_ms(
        [&] { kernels::reference::gemm_tn(m, k, n, a.data(), b.data(), c1.data(), 0.0); },
        repeat);
    const double tp = time_ms(
        [&] { kernels::gemm_tn(m, k, n, a.data(), b.data(), c2.data(), 0.0); },
        repeat);
    row("gemm_tn 384^3", ts, tp,
        std::memcmp(c1.data(), c2.data(), c1.size() * 8) == 0);
  }
  {
    const int cin = 16, h = 128, w = 80, cout = 32, kk = 4, stride = 2, pad = 1;
    auto x = random_vec((size_t)cin * h * w, &rng);
    auto wt = random_vec((size_t)cout * cin * kk * kk, &rng);
    auto bias = random_vec(cout, &rng);
    const int oh = kernels::conv_out_len(h, kk, stride, pad);
    const int ow = kernels::conv_out_len(w, kk, stride, pad);
    std::vector<double> o1((size_t)cout * oh * ow), o2 = o1;
    const double ts = time_ms(
        [&] {
          kernels::reference::conv2d(x.data(), cin, h, w, wt.data(), bias.data(),
                                     cout, kk, kk, stride, pad, o1.data());
        },
        repeat);
    const double tp = time_ms(
        [&] {
          kernels::conv2d(x.data(), cin, h, w, wt.data(), bias.data(), cout,
                          kk, kk, stride, pad, o2.data());
        },
        repeat);
    row("conv2d 16x128x80 -> 32", ts, tp,
        std::memcmp(o1.data(), o2.data(), o1.size() * 8) == 0);
  }
  {
    const int cin = 8, len = 48000, cout = 16, kk = 8, stride = 4;
    auto x = random_vec((size_t)cin * len, &rng);
    auto wt = random_vec((size_t)cout * cin * kk, &rng);
    auto bias = random_vec(cout, &rng);
    const int olen = kernels::conv_out_len(len, kk, stride, 0);
    std::vector<double> o1((size_t)cout * olen), o2 = o1;
    const double ts = time_ms(
        [&] {
          kernels::reference::conv1d(x.data(), cin, len, wt.data(), bias.data(),
                                     cout, kk, stride, 0, o1.data());
        },
        repeat);
    const double tp = time_ms(
        [&] {
          kernels::conv1d(x.data(), cin, len, wt.data(), bias.data(), cout, kk,
                          stride, 0, o2.data());
        },
        repeat);
    row("conv1d 8x48000 -> 16", ts, tp,
        std::memcmp(o1.data(), o2.data(), o1.size() * 8) == 0);
  }
  {
    const int t = 512, c = 128, kk = 7, pad = 3;
    auto x = random_vec((size_t)t * c, &rng);
    auto wt = random_vec((size_t)c * kk, &rng);
    auto bias = random_vec(c, &rng);
    std::vector<double> o1((size_t)t * c), o2 = o1;
    const double ts = time_ms(
        [&] {
          kernels::reference::depthwise_conv_time(x.data(), t, c, wt.data(),
                                                  bias.data(), kk, pad, o1.data());
        },
        repeat);
    const double tp = time_ms(
        [&] {
          kernels::depthwise_conv_time(x.data(), t, c, wt.data(), bias.data(),
                                       kk, pad, o2.data());
        },
        repeat);
    row("depthwise 512x128 k7", ts, tp,
        std::memcmp(o1.data(), o2.data(), o1.size() * 8) == 0);
  }
  return 0;
}
