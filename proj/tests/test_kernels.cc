// tests/test_kernels.cc

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
#include <vector>

#include "core/mat.h"
#include "core/rng.h"
#include "doctest.h"
#include "kernels/kernels.h"
#include "kernels/reference.h"

using namespace adaptasr;

namespace {

std::vector<double> random_vec(size_t n, Rng* rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng->normal();
  return v;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("gemm variants match the serial reference bit for bit") {
  Rng rng(2024);
  const int shapes[][3] = {{1, 1, 1},   {3, 5, 7},    {17, 31, 13},
                           {64, 64, 64}, {128, 40, 9}, {2, 300, 2}};
  for (const auto& s : shapes) {
    const int m = s[0], k = s[1], n = s[2];
    auto A = random_vec(static_cast<size_t>(m) * k, &rng);
    auto Bnn = random_vec(static_cast<size_t>(k) * n, &rng);
    auto Bnt = random_vec(static_cast<size_t>(n) * k, &rng);
    auto At = random_vec(static_cast<size_t>(k) * m, &rng);
    auto C0 = random_vec(static_cast<size_t>(m) * n, &rng);

    for (double beta : {0.0, 1.0, 0.5}) {
      auto c1 = C0, c2 = C0;
      kernels::gemm_nn(m, k, n, A.data(), Bnn.data(), c1.data(), beta);
      kernels::reference::gemm_nn(m, k, n, A.data(), Bnn.data(), c2.data(),
                                  beta);
      CHECK(bits_equal(c1, c2));

      c1 = C0, c2 = C0;
      kernels::gemm_nt(m, k, n, A.data(), Bnt.data(), c1.data(), beta);
      kernels::reference::gemm_nt(m, k, n, A.data(), Bnt.data(), c2.data(),
                                  beta);
      CHECK(bits_equal(c1, c2));

      c1 = C0, c2 = C0;
      kernels::gemm_tn(m, k, n, At.data(), Bnn.data(), c1.data(), beta);
      kernels::reference::gemm_tn(m, k, n, At.data(), Bnn.data(), c2.data(),
                                  beta);
      CHECK(bits_equal(c1, c2));
    }
  }
}

TEST_CASE("gemm results are independent of the thread count") {
  Rng rng(7);
  const int m = 61, k = 47, n = 53;
  auto A = random_vec(static_cast<size_t>(m) * k, &rng);
  auto B = random_vec(static_cast<size_t>(k) * n, &rng);
  std::vector<double> c1(static_cast<size_t>(m) * n, 0.0), c2 = c1;

  kernels::set_threads(1);
  kernels::gemm_nn(m, k, n, A.data(), B.data(), c1.data(), 0.0);
  kernels::set_threads(kernels::max_threads() > 1 ? kernels::max_threads() : 4);
  kernels::gemm_nn(m, k, n, A.data(), B.data(), c2.data(), 0.0);
  CHECK(bits_equal(c1, c2));
}

TEST_CASE("conv2d matches reference and shape formula") {
  Rng rng(11);
  const int cin = 3, h = 13, w_in = 9, cout = 5, kh = 4, kw = 4, stride = 2,
            pad = 1;
  auto x = random_vec(static_cast<size_t>(cin) * h * w_in, &rng);
  auto w = random_vec(static_cast<size_t>(cout) * cin * kh * kw, &rng);
  auto b = random_vec(cout, &rng);
  const int oh = kernels::conv_out_len(h, kh, stride, pad);
  const int ow = kernels::conv_out_len(w_in, kw, stride, pad);
  CHECK(oh == h / 2);  // kernel 4 / stride 2 / pad 1 halves the axis
  CHECK(ow == w_in / 2);
  std::vector<double> o1(static_cast<size_t>(cout) * oh * ow),
      o2(static_cast<size_t>(cout) * oh * ow);
  kernels::conv2d(x.data(), cin, h, w_in, w.data(), b.data(), cout, kh, kw,
                  stride, pad, o1.data());
  kernels::reference::conv2d(x.data(), cin, h, w_in, w.data(), b.data(), cout,
                             kh, kw, stride, pad, o2.data());
  CHECK(bits_equal(o1, o2));
}

TEST_CASE("conv1d and transposed conv1d match reference") {
  Rng rng(13);
  const int cin = 4, len = 40, cout = 6, k = 8, stride = 4;
  auto x = random_vec(static_cast<size_t>(cin) * len, &rng);
  auto w = random_vec(static_cast<size_t>(cout) * cin * k, &rng);
  auto wt = random_vec(static_cast<size_t>(cin) * cout * k, &rng);
  auto b = random_vec(cout, &rng);

  const int olen = kernels::conv_out_len(len, k, stride, 0);
  std::vector<double> o1(static_cast<size_t>(cout) * olen), o2 = o1;
  kernels::conv1d(x.data(), cin, len, w.data(), b.data(), cout, k, stride, 0,
                  o1.data());
  kernels::reference::conv1d(x.data(), cin, len, w.data(), b.data(), cout, k,
                             stride, 0, o2.data());
  CHECK(bits_equal(o1, o2));

  const int tlen = (len - 1) * stride + k;
  std::vector<double> t1(static_cast<size_t>(cout) * tlen), t2 = t1;
  kernels::conv1d_transpose(x.data(), cin, len, wt.data(), b.data(), cout, k,
                            stride, t1.data());
  kernels::reference::conv1d_transpose(x.data(), cin, len, wt.data(), b.data(),
                                       cout, k, stride, t2.data());
  CHECK(bits_equal(t1, t2));
}

TEST_CASE("depthwise time convolution matches reference") {
  Rng rng(17);
  const int t = 25, c = 12, k = 7, pad = 3;
  auto x = random_vec(static_cast<size_t>(t) * c, &rng);
  auto w = random_vec(static_cast<size_t>(c) * k, &rng);
  auto b = random_vec(c, &rng);
  std::vector<double> o1(static_cast<size_t>(t) * c), o2 = o1;
  kernels::depthwise_conv_time(x.data(), t, c, w.data(), b.data(), k, pad,
                               o1.data());
  kernels::reference::depthwise_conv_time(x.data(), t, c, w.data(), b.data(),
                                          k, pad, o2.data());
  CHECK(bits_equal(o1, o2));
}
