// tests/test_tape.cc

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
#include <functional>
#include <vector>

#include "core/mat.h"
#include "core/rng.h"
#include "doctest.h"
#include "tape/graph.h"

using namespace adaptasr;
using tape::Graph;
using tape::Param;

namespace {

Mat random_mat(int r, int c, Rng* rng, double scale = 1.0) {
  Mat m(r, c);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = scale * rng->normal();
  return m;
}

// Checks every analytic input gradient of `build` against central finite
// differences. `build` maps the list of input matrices to a scalar node.
void check_grads(
    std::vector<Mat> inputs,
    const std::function<int(Graph&, const std::vector<int>&)>& build,
    double tol = 1e-6, double h = 1e-5) {
  std::vector<Param> params(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) params[i].value = inputs[i];

  auto eval = [&]() {
    Graph g;
    std::vector<int> ids;
    ids.reserve(params.size());
    for (auto& p : params) ids.push_back(g.param(p));
    const int root = build(g, ids);
    return g.value(root)(0, 0);
  };

  // Analytic gradients.
  for (auto& p : params) p.grad = Mat(p.value.rows(), p.value.cols());
  {
    Graph g;
    std::vector<int> ids;
    for (auto& p : params) ids.push_back(g.param(p));
    const int root = build(g, ids);
    g.backward(root);
  }

  for (size_t pi = 0; pi < params.size(); ++pi) {
    Param& p = params[pi];
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double w0 = p.value.data()[i];
      p.value.data()[i] = w0 + h;
      const double fp = eval();
      p.value.data()[i] = w0 - h;
      const double fm = eval();
      p.value.data()[i] = w0;
      const double num = (fp - fm) / (2.0 * h);
      const double ana = p.grad.data()[i];
      const double err =
          std::fabs(ana - num) / std::max({std::fabs(ana), std::fabs(num), 1e-4});
      INFO("input ", pi, " element ", i, " analytic ", ana, " numeric ", num);
      CHECK(err < tol);
    }
  }
}

}  // namespace

TEST_CASE("gradients: add/sub/mul/scale") {
  Rng rng(2);
  Mat w = random_mat(3, 4, &rng);
  check_grads({random_mat(3, 4, &rng), random_mat(3, 4, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                const int s = g.mul(g.add(in[0], in[1]), g.sub(in[0], in[1]));
                return g.weighted_sum(g.scale(s, 1.7), w);
              });
}

TEST_CASE("gradients: bias and row scaling") {
  Rng rng(3);
  Mat w = random_mat(4, 5, &rng);
  check_grads({random_mat(4, 5, &rng), random_mat(1, 5, &rng),
               random_mat(1, 5, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(
                    g.mul_row(g.add_row(in[0], in[1]), in[2]), w);
              });
}

TEST_CASE("gradients: activations") {
  Rng rng(4);
  Mat w = random_mat(3, 6, &rng);
  check_grads({random_mat(3, 6, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                const int a = g.swish(in[0]);
                const int b = g.sigmoid(a);
                const int c = g.tanh_act(b);
                return g.weighted_sum(c, w);
              });
  // relu has a kink at zero; keep inputs away from it.
  Mat x = random_mat(3, 6, &rng);
  for (size_t i = 0; i < x.size(); ++i)
    if (std::fabs(x.data()[i]) < 0.1) x.data()[i] = 0.5;
  check_grads({x}, [w](Graph& g, const std::vector<int>& in) {
    return g.weighted_sum(g.relu(in[0]), w);
  });
}

TEST_CASE("gradients: glu, log_floor, sqrt_eps") {
  Rng rng(5);
  Mat w = random_mat(3, 4, &rng);
  check_grads({random_mat(3, 8, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.glu_cols(in[0]), w);
              });
  Mat pos = random_mat(3, 4, &rng);
  for (size_t i = 0; i < pos.size(); ++i)
    pos.data()[i] = std::fabs(pos.data()[i]) + 0.5;
  check_grads({pos}, [w](Graph& g, const std::vector<int>& in) {
    return g.weighted_sum(g.log_floor(in[0], 1e-10), w);
  });
  check_grads({pos}, [w](Graph& g, const std::vector<int>& in) {
    return g.weighted_sum(g.sqrt_eps(in[0], 1e-8), w);
  });
}

TEST_CASE("gradients: matmul and matmul_nt") {
  Rng rng(6);
  Mat w = random_mat(3, 6, &rng);
  check_grads({random_mat(3, 5, &rng), random_mat(5, 6, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.matmul(in[0], in[1]), w);
              });
  Mat w2 = random_mat(3, 7, &rng);
  check_grads({random_mat(3, 5, &rng), random_mat(7, 5, &rng)},
              [w2](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.matmul_nt(in[0], in[1]), w2);
              });
}

TEST_CASE("gradients: shape ops") {
  Rng rng(7);
  Mat w = random_mat(2, 6, &rng);
  check_grads({random_mat(3, 4, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.reshape(in[0], 2, 6), w);
              });
  Mat w2 = random_mat(2, 3, &rng);
  check_grads({random_mat(5, 6, &rng)},
              [w2](Graph& g, const std::vector<int>& in) {
                const int r = g.slice_rows(in[0], 1, 3);
                return g.weighted_sum(g.slice_cols(r, 2, 5), w2);
              });
  Mat w3 = random_mat(5, 4, &rng);
  check_grads({random_mat(2, 4, &rng), random_mat(3, 4, &rng)},
              [w3](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.concat_rows({in[0], in[1]}), w3);
              });
  Mat w4 = random_mat(3, 7, &rng);
  check_grads({random_mat(3, 3, &rng), random_mat(3, 4, &rng)},
              [w4](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.concat_cols({in[0], in[1]}), w4);
              });
  Mat w5 = random_mat(1, 9, &rng);
  check_grads({random_mat(1, 5, &rng)},
              [w5](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.pad_cols(in[0], 3, 1), w5);
              });
  Mat w6 = random_mat(4, 6, &rng);
  check_grads({random_mat(2, 12, &rng)},
              [w6](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.permute_chw_to_hcw(in[0], 2, 4, 3), w6);
              });
}

TEST_CASE("gradients: softmax, rel_shift, layer_norm") {
  Rng rng(8);
  Mat w = random_mat(4, 4, &rng);
  check_grads({random_mat(4, 4, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.row_softmax(in[0]), w);
              });
  Mat mask(4, 4);
  mask(0, 3) = -1e30;
  mask(2, 0) = -1e30;
  check_grads({random_mat(4, 4, &rng)},
              [w, mask](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.row_softmax(in[0], &mask), w);
              });
  const int t = 4;
  Mat w2 = random_mat(t, t, &rng);
  check_grads({random_mat(t, 2 * t - 1, &rng)},
              [w2](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.rel_shift(in[0]), w2);
              });
  Mat w3 = random_mat(3, 5, &rng);
  check_grads({random_mat(3, 5, &rng), random_mat(1, 5, &rng),
               random_mat(1, 5, &rng)},
              [w3](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(
                    g.layer_norm(in[0], in[1], in[2], 1e-6), w3);
              },
              1e-5);
}

TEST_CASE("rel_shift places relative positions on the right diagonals") {
  // Row i of the input holds scores for relative positions T-1, ..., -(T-1)
  // laid out so that column T-1-i+j is position i-j.
  const int t = 3;
  Mat a(t, 2 * t - 1);
  for (int i = 0; i < t; ++i)
    for (int m = 0; m < 2 * t - 1; ++m) a(i, m) = 100.0 * i + m;
  Graph g;
  const int out = g.rel_shift(g.constant(a));
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      CHECK(g.value(out)(i, j) == doctest::Approx(100.0 * i + (t - 1 - i + j)));
}

TEST_CASE("gradients: embedding") {
  Rng rng(9);
  Mat w = random_mat(4, 3, &rng);
  check_grads({random_mat(5, 3, &rng)},
              [w](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.embed({0, 2, 4, 2}, in[0]), w);
              });
}

TEST_CASE("gradients: conv2d") {
  Rng rng(10);
  const int cin = 2, h = 6, wdt = 5, cout = 3, kh = 4, kw = 4;
  Mat w = random_mat(cout, (h / 2) * (wdt / 2), &rng);
  check_grads({random_mat(cin, h * wdt, &rng),
               random_mat(cout, cin * kh * kw, &rng, 0.4),
               random_mat(1, cout, &rng)},
              [=](Graph& g, const std::vector<int>& in) {
                const int y = g.conv2d(in[0], in[1], in[2], cin, h, wdt, cout,
                                       kh, kw, 2, 1);
                return g.weighted_sum(y, w);
              });
}

TEST_CASE("gradients: conv1d family") {
  Rng rng(11);
  const int cin = 2, len = 21, cout = 3, k = 8, stride = 4;
  const int olen = (len - k) / stride + 1;
  Mat w = random_mat(cout, olen, &rng);
  check_grads({random_mat(cin, len, &rng),
               random_mat(cout, cin * k, &rng, 0.4), random_mat(1, cout, &rng)},
              [=](Graph& g, const std::vector<int>& in) {
                const int y =
                    g.conv1d(in[0], in[1], in[2], cin, len, cout, k, stride, 0);
                return g.weighted_sum(y, w);
              });
  const int len2 = 5, tlen = (len2 - 1) * stride + k;
  Mat w2 = random_mat(cout, tlen, &rng);
  check_grads({random_mat(cin, len2, &rng),
               random_mat(cin, cout * k, &rng, 0.4), random_mat(1, cout, &rng)},
              [=](Graph& g, const std::vector<int>& in) {
                const int y = g.conv1d_transpose(in[0], in[1], in[2], cin,
                                                 len2, cout, k, stride);
                return g.weighted_sum(y, w2);
              });
  const int t = 9, c = 4, dk = 7;
  Mat w3 = random_mat(t, c, &rng);
  check_grads({random_mat(t, c, &rng), random_mat(c, dk, &rng, 0.4),
               random_mat(1, c, &rng)},
              [=](Graph& g, const std::vector<int>& in) {
                const int y =
                    g.depthwise_conv_time(in[0], in[1], in[2], dk, 3);
                return g.weighted_sum(y, w3);
              });
}

TEST_CASE("gradients: frame_signal and losses") {
  Rng rng(12);
  const int n = 30, win = 12, hop = 6;
  const int t = 1 + (n - win) / hop;
  Mat w = random_mat(t, win, &rng);
  check_grads({random_mat(1, n, &rng)},
              [=](Graph& g, const std::vector<int>& in) {
                return g.weighted_sum(g.frame_signal(in[0], win, hop), w);
              });
  check_grads({random_mat(3, 4, &rng), random_mat(3, 4, &rng)},
              [](Graph& g, const std::vector<int>& in) {
                return g.mse_loss(in[0], in[1]);
              });
  // l1 has a kink where a == b; random doubles never tie.
  check_grads({random_mat(3, 4, &rng), random_mat(3, 4, &rng)},
              [](Graph& g, const std::vector<int>& in) {
                return g.l1_loss(in[0], in[1]);
              });
  check_grads({random_mat(2, 5, &rng)},
              [](Graph& g, const std::vector<int>& in) {
                return g.mean_all(g.mul(in[0], in[0]));
              });
}

TEST_CASE("gradients: label-smoothed cross entropy") {
  Rng rng(13);
  for (double smoothing : {0.0, 0.1}) {
    check_grads({random_mat(4, 6, &rng)},
                [smoothing](Graph& g, const std::vector<int>& in) {
                  return g.label_smoothed_ce(in[0], {1, 0, 5, 3}, smoothing);
                });
  }
}

TEST_CASE("label-smoothed cross entropy closed forms") {
  // Uniform logits, no smoothing: loss is ln V.
  Graph g;
  const int v = 23;
  Mat logits(3, v);
  logits.fill(0.37);
  const int l = g.label_smoothed_ce(g.constant(logits), {0, 11, 22}, 0.0);
  CHECK(g.value(l)(0, 0) == doctest::Approx(std::log(static_cast<double>(v)))
                                .epsilon(1e-12));
  // Concentrated logits: loss tends to zero.
  Mat sharp(2, v);
  sharp.fill(0.0);
  sharp(0, 3) = 1e4;
  sharp(1, 7) = 1e4;
  const int l2 = g.label_smoothed_ce(g.constant(sharp), {3, 7}, 0.0);
  CHECK(g.value(l2)(0, 0) < 1e-8);
}

TEST_CASE("frozen params receive no gradient and are skipped in backward") {
  Rng rng(14);
  Param frozen, live;
  frozen.value = random_mat(3, 3, &rng);
  frozen.trainable = false;
  live.value = random_mat(3, 3, &rng);
  frozen.grad = Mat(3, 3);
  live.grad = Mat(3, 3);

  Graph g;
  const int f = g.param(frozen);
  const int x = g.param(live);
  const int y = g.matmul(f, x);
  const int loss = g.mean_all(g.mul(y, y));
  g.backward(loss);

  double frozen_grad = 0.0, live_grad = 0.0;
  for (size_t i = 0; i < 9; ++i) {
    frozen_grad += std::fabs(frozen.grad.data()[i]);
    live_grad += std::fabs(live.grad.data()[i]);
  }
  CHECK(frozen_grad == 0.0);
  CHECK(live_grad > 0.0);
}

TEST_CASE("gradient flows through frozen weights to earlier trainable nodes") {
  Rng rng(15);
  Param early, frozen;
  early.value = random_mat(2, 3, &rng);
  frozen.value = random_mat(3, 4, &rng);
  frozen.trainable = false;
  early.grad = Mat(2, 3);
  frozen.grad = Mat(3, 4);

  Graph g;
  const int e = g.param(early);
  const int f = g.param(frozen);
  const int loss = g.mean_all(g.mul(g.matmul(e, f), g.matmul(e, f)));
  g.backward(loss);

  double early_grad = 0.0;
  for (size_t i = 0; i < early.grad.size(); ++i)
    early_grad += std::fabs(early.grad.data()[i]);
  CHECK(early_grad > 0.0);
}
