// tape/graph.h

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

#ifndef ADAPTASR_TAPE_GRAPH_H_
#define ADAPTASR_TAPE_GRAPH_H_

#include <functional>
#include <vector>

#include "core/mat.h"

namespace adaptasr::tape {

// A named model parameter. `grad` persists across graphs; the trainer zeroes
// it before each accumulation window. Non-trainable params never receive
// gradient and are skipped by optimizers.
struct Param {
  Mat value;
  Mat grad;
  bool trainable = true;
};

// Reverse-mode tape over dense double matrices. One Graph is built per
// forward pass; values are computed eagerly at op-creation time and
// backward() walks the tape in reverse creation order.
class Graph {
 public:
  int leaf(Mat value, bool needs_grad = false);
  int constant(Mat value) { return leaf(std::move(value), false); }
  int param(Param& p);

  const Mat& value(int id) const;
  // Gradient of the last backward() root w.r.t. node `id`; zeros if the node
  // never received gradient.
  Mat grad_of(int id) const;
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  size_t num_nodes() const { return nodes_.size(); }

  // --- elementwise / broadcast ---
  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int scale(int a, double c);
  int add_row(int a, int bias);       // bias 1 x n broadcast over rows
  int mul_row(int a, int rowvec);     // rowvec 1 x n broadcast over rows
  int relu(int a);
  int swish(int a);
  int sigmoid(int a);
  int tanh_act(int a);
  int glu_cols(int a);                // (T x 2d) -> (T x d)
  int log_floor(int a, double eps);   // log(max(x, eps))
  int sqrt_eps(int a, double eps);    // sqrt(x + eps)

  // --- linear algebra ---
  int matmul(int a, int b);           // (m x k)(k x n)
  int matmul_nt(int a, int b);        // (m x k)(n x k)^T

  // --- shape ---
  int reshape(int a, int rows, int cols);
  int slice_rows(int a, int r0, int r1);
  int slice_cols(int a, int c0, int c1);
  int concat_rows(const std::vector<int>& parts);
  int concat_cols(const std::vector<int>& parts);
  int pad_cols(int a, int left, int right);
  // (C x H*W) channel-major image -> (H x W*C) per-row frames; column order
  // within a row is c*W + x.
  int permute_chw_to_hcw(int a, int c, int h, int w);

  // --- attention pieces ---
  // mask is added to the logits before the row softmax (e.g. -1e30 entries).
  int row_softmax(int a, const Mat* mask = nullptr);
  // a is (T x 2T-1); column T-1-i+j holds the score of relative position
  // i-j. Returns the (T x T) aligned score matrix.
  int rel_shift(int a);
  int layer_norm(int x, int gamma, int beta, double eps = 1e-12);

  // --- embeddings ---
  int embed(const std::vector<int>& ids, int table);  // table (V x d)

  // --- convolution ---
  int conv2d(int x, int w, int bias, int cin, int h, int wdt, int cout, int kh,
             int kw, int stride, int pad);
  int conv1d(int x, int w, int bias, int cin, int len, int cout, int k,
             int stride, int pad);
  int conv1d_transpose(int x, int w, int bias, int cin, int len, int cout,
                       int k, int stride);
  int depthwise_conv_time(int x, int w, int bias, int k, int pad);

  // --- signal ---
  int frame_signal(int x, int win, int hop);  // (1 x N) -> (T x win)

  // --- reductions / losses (all 1 x 1) ---
  int mean_all(int a);
  int weighted_sum(int a, Mat weights);
  int l1_loss(int a, int b);
  int mse_loss(int a, int b);
  // Teacher-forced label-smoothed cross entropy, mean over target tokens.
  // Smoothing mass is spread uniformly over the whole vocabulary.
  int label_smoothed_ce(int logits, const std::vector<int>& targets,
                        double smoothing);

  void backward(int root);

 private:
  using BackwardFn = std::function<void(Graph&, const Mat&)>;

  struct Node {
    Mat value;
    const Mat* external = nullptr;  // set for param nodes; aliases Param.value
    Mat grad;
    bool needs_grad = false;
    bool grad_alloc = false;
    Param* bound = nullptr;
    BackwardFn backward;
  };

  int add_node(Mat value, bool needs_grad, BackwardFn bwd);
  // Gradient accumulator for `id`, or nullptr when the node does not
  // participate in differentiation.
  Mat* accum(int id);

  std::vector<Node> nodes_;
};

}  // namespace adaptasr::tape

#endif  // ADAPTASR_TAPE_GRAPH_H_
